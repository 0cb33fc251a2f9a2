import json
import logging

import pytest
from hypothesis import HealthCheck, assume, given, settings

import oracles
from conftest import MAX_NP, load, random_plant
from netsup import (NetworkConfig, Tdes, build_networked_plant, compose, oracle_max_permissive,
                    simulate_step, synthesize, verify_controllability, verify_nonblocking,
                    verify_safety, verify_tlf)
from netsup.synthesis import forcible_alphabet
from netsup.tdes import project_word, reach
from netsup.verification import (FAIL, NOT_EVALUATED, PASS, VerificationReport, is_proper,
                                 candidate_supervisors, verify_all)

logging.getLogger("netsup").setLevel(logging.ERROR)

PED = NetworkConfig(1, 1, 1, 2)
EX2 = NetworkConfig(1, 1, 2, 2)


def idle(observed=()):
    """Never commands anything but reads every observation."""
    return Tdes.build("idle", ["y0"], set(observed),
                      [("y0", e, "y0") for e in ("tick", *sorted(observed))], "y0", {"y0"})


def replay(nsp, word):
    s = nsp.initial
    for e in word:
        s, _, _ = simulate_step(nsp, s, e)
    return s


def example_nsp():
    g, ev = load("nonfifo_example.tdes")
    np_ = build_networked_plant(g, ev, EX2)
    ns = synthesize(np_, ev).supervisor
    return g, ev, np_, ns, compose(ns, g, ev, EX2)


def test_example_supervisor_passes_everything():
    g, ev, _, _, nsp = example_nsp()
    results = verify_all(nsp, g, ev)
    assert [r.verdict for r in results] == [PASS, PASS, PASS]


def test_trivial_automaton_passes():
    t = Tdes.build("T", ["s"], set(), [("s", "tick", "s")], "s", {"s"})
    assert verify_nonblocking(t).passed and verify_tlf(t).passed


def test_idle_supervisor_blocking_verdict_matches_oracle(pedestrian):
    g, ev = pedestrian
    nsp = compose(idle(), g, ev, PED)
    r = verify_nonblocking(nsp)
    assert r.passed == oracles.nonblocking(nsp)
    assert r.verdict == FAIL
    end = replay(nsp, r.counterexample)
    assert end not in oracles.coreach(nsp)


def test_drawn_supervisor_fails_with_replayable_traces(pedestrian):
    g, ev = pedestrian
    ns, _ = load("pedestrian_ns_figure.tdes")
    nsp = compose(ns, g, ev, PED)
    nb, tlf, ctrl = verify_all(nsp, g, ev)
    assert nb.verdict == FAIL and tlf.verdict == FAIL
    assert nb.counterexample == ["j_e", "tick", "tick"]
    assert nb.decoded_trace[-1] == "z6 (a2,y4,{},[])"
    assert replay(nsp, nb.counterexample) not in oracles.coreach(nsp)
    assert replay(nsp, tlf.counterexample) not in oracles.reaches_tick(nsp)


def test_missing_uncontrollable_edge_breaks_controllability(pedestrian):
    g, ev = pedestrian
    nsp = compose(idle(ev.observed_events), g, ev, PED)
    p_edges = [t for t in nsp.transitions if t[1] == "p"]
    broken = Tdes.build(nsp.name, nsp.states, nsp.alphabet,
                        [t for t in nsp.transitions if t != p_edges[0]], nsp.initial,
                        nsp.marked, nsp.decode)
    r = verify_controllability(broken, g, ev)
    assert r.verdict == FAIL and r.counterexample[-1] == "p"
    prefix = r.counterexample[:-1]
    with pytest.raises(ValueError, match="not enabled"):
        simulate_step(broken, replay(broken, prefix), "p")
    assert verify_controllability(nsp, g, ev).passed


def test_safety():
    g, ev, _, _, nsp = example_nsp()
    order, _ = load("order_requirement.tdes")
    univ = Tdes.build("U", ["q"], {"a", "b"}, [("q", e, "q") for e in ("a", "b", "tick")], "q")
    assert verify_safety(nsp, univ).passed
    assert verify_safety(nsp, order).passed


def test_safety_violation_has_early_event(pedestrian):
    g, ev = pedestrian
    jump_first = Tdes.build("R", ["q0", "q1"], {"j", "p"},
                            [("q0", "j", "q1"), ("q1", "p", "q1"), ("q0", "tick", "q0"),
                             ("q1", "tick", "q1")], "q0", {"q1"})
    nsp = compose(idle(), g, ev, PED)
    r = verify_safety(nsp, jump_first)
    assert r.verdict == FAIL and "p" in r.counterexample
    assert "j" not in r.counterexample
    replay(nsp, r.counterexample)


def test_oracle_budget_zero_not_evaluated():
    g, ev, np_, ns, _ = example_nsp()
    r = oracle_max_permissive(np_, g, ev, EX2, ns, budget=0)
    assert r.verdict == NOT_EVALUATED


def test_oracle_confirms_example_supervisor():
    g, ev, np_, ns, _ = example_nsp()
    r = oracle_max_permissive(np_, g, ev, EX2, ns)
    assert r.verdict == PASS


def test_oracle_detects_too_restrictive_supervisor():
    g, ev, np_, ns, _ = example_nsp()
    # a supervisor that never commands anything is proper-or-not, but it is
    # certainly not maximal when a proper supervisor with more behaviour exists
    r = oracle_max_permissive(np_, g, ev, EX2, idle())
    assert r.verdict == FAIL


def test_candidates_include_full_observer():
    g, ev, np_, _, _ = example_nsp()
    sizes = [len(c) for c in candidate_supervisors(np_, ev)]
    assert sizes and max(sizes) == sizes[0]


def test_report_json_schema():
    g, ev, _, _, nsp = example_nsp()
    rep = VerificationReport({"plant": g.name}, verify_all(nsp, g, ev))
    data = json.loads(rep.to_json())
    assert set(data) == {"header", "checks"}
    for c in data["checks"]:
        assert {"check", "verdict", "depth", "counterexample", "decoded_trace"} <= set(c)


# -- state-wise controllability against the word-quantified definition -------


def word_controllable(nsp, g, ev, depth, enabling_forcible=True):
    preempt = forcible_alphabet(ev, enabling_forcible) | ev.observed_events
    for w in oracles.words(nsp, depth - 1):
        s = nsp.run(w)
        a = g.run(project_word(w, g.alphabet))
        for e in g.enabled(a):
            if e == "tick":
                if nsp.step(s, "tick") is None and not any(nsp.step(s, f) for f in preempt):
                    return False
            elif e in ev.uncontrollable and nsp.step(s, e) is None:
                return False
    return True


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(random_plant())
def test_statewise_controllability_matches_word_definition(gp):
    g, ev = gp
    np_ = build_networked_plant(g, ev, EX2)
    assume(len(np_) <= MAX_NP)
    out = synthesize(np_, ev)
    ns = out.supervisor if out.found else idle(ev.observed_events)
    nsp = compose(ns, g, ev, EX2)
    variants = [nsp]
    for drop in nsp.transitions[:4]:
        variants.append(Tdes.build(nsp.name, nsp.states, nsp.alphabet,
                                   [t for t in nsp.transitions if t != drop], nsp.initial,
                                   nsp.marked, nsp.decode))
    for v in variants:
        v = reach(v)
        # words up to the state count reach every reachable state
        depth = min(len(v) + 1, 8)
        assume(len(v) < 8)
        assert verify_controllability(v, g, ev).passed == word_controllable(v, g, ev, depth)


def _proper_behaviours(np_, g, ev, cfg, prune):
    out = set()
    for cand in candidate_supervisors(np_, ev, cfg.enabling_forcible, prune=prune):
        nsp = compose(cand, g, ev, cfg)
        if is_proper(nsp, g, ev, cfg.enabling_forcible):
            out.add(frozenset((nsp.decode[s].render(), e, nsp.decode[d].render())
                              for s, e, d in nsp.transitions))
    return out


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(random_plant(max_states=4))
def test_tick_pruning_keeps_every_proper_behaviour(gp):
    g, ev = gp
    np_ = build_networked_plant(g, ev, EX2)
    assume(sum(1 for _, e, _ in np_.transitions if e in ev.enabling_events) <= 4)
    assume(len(np_) <= 20)
    full = _proper_behaviours(np_, g, ev, EX2, prune=False)
    assert _proper_behaviours(np_, g, ev, EX2, prune=True) == full


def test_tick_pruning_on_fixed_seed_sweep():
    import random
    from conftest import seeded_plant
    rnd = random.Random(3)
    compared = 0
    for _ in range(400):
        g, ev = seeded_plant(rnd)
        np_ = build_networked_plant(g, ev, EX2)
        if sum(1 for _, e, _ in np_.transitions if e in ev.enabling_events) > 4 or len(np_) > 20:
            continue
        full = _proper_behaviours(np_, g, ev, EX2, prune=False)
        assert _proper_behaviours(np_, g, ev, EX2, prune=True) == full
        compared += bool(full)
    assert compared >= 10


# -- zero-delay networks coincide with conventional controllability ----------


def _zero_delay_nsp(s, g):
    """Hand-built NSP for Nc=No=0: supervisor and plant move in lockstep and
    both channels stay empty."""
    from netsup import NspState
    from netsup.channels import ControlChannel, ObservationChannel
    prod = oracles.edges(s), oracles.edges(g)
    start = (g.initial, s.initial)
    names, trans, todo = {start: "z0"}, [], [start]
    while todo:
        a, y = todo.pop(0)
        for e, a2 in sorted(prod[1].get(a, {}).items()):
            y2 = prod[0].get(y, {}).get(e)
            if y2 is None:
                continue
            if (a2, y2) not in names:
                names[(a2, y2)] = f"z{len(names)}"
                todo.append((a2, y2))
            trans.append((names[(a, y)], e, names[(a2, y2)]))
    decode = {z: NspState(a, y, ObservationChannel(0, 0), ControlChannel(0, 0)) for (a, y), z in names.items()}
    return Tdes.build("NSP", list(names.values()), g.alphabet, trans, "z0",
                      {z for (a, _), z in names.items() if a in g.marked}, decode)


def _conventionally_controllable(s, g, ev, depth):
    """Word-level check: no uncontrollable plant continuation is cut, and a
    cut tick always has an enabled forcible event beside it."""
    gd, sd = oracles.edges(g), oracles.edges(s)
    for w in oracles.words(g, depth):
        a, y = g.initial, s.initial
        for e in w:
            a, y = gd[a][e], sd.get(y, {}).get(e)
            if y is None:
                break
        if y is None:
            continue
        allowed = {e for e in gd.get(a, {}) if e in sd.get(y, {})}
        for e in gd.get(a, {}):
            if e in allowed:
                continue
            if e == "tick" and not (allowed & ev.forcible):
                return False
            if e in ev.uncontrollable:
                return False
    return True


def test_zero_delay_controllability_matches_conventional_definition():
    import random
    from netsup import Event, EventTable
    rnd = random.Random(5)
    verdicts = set()
    for _ in range(300):
        ev = EventTable([Event("c", True, rnd.random() < 0.5), Event("u", False)])
        autos = []
        for _ in range(2):
            st = ["q0", "q1", "q2"]
            tr = [(q, e, rnd.choice(st)) for q in st for e in ("c", "u", "tick") if rnd.random() < 0.6]
            autos.append(Tdes.build("A", st, {"c", "u"}, tr, "q0", {rnd.choice(st)}))
        g, s = autos
        nsp = _zero_delay_nsp(s, g)
        expected = _conventionally_controllable(s, g, ev, 9)
        assert verify_controllability(nsp, g, ev).passed == expected
        verdicts.add(expected)
    assert verdicts == {True, False}
