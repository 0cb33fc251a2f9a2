"""Checkers for supervised networked plants.

Every check is independent of the synthesis code: it inspects the composed
automaton directly and returns a verdict with a replayable counterexample.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .composition import compose
from .events import TICK, EventTable
from .netplant import NetworkConfig
from .synthesis import forcible_alphabet
from .tdes import (Tdes, blocking_states, language_included, natural_key,
                   natural_projection, reach, shortest_path, timelock_states)

PASS, FAIL, NOT_EVALUATED = "pass", "fail", "not evaluated"


@dataclass
class CheckResult:
    check: str
    verdict: str
    depth: int | None = None
    counterexample: list[str] = field(default_factory=list)
    decoded_trace: list[str] = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def as_dict(self) -> dict:
        d = {"check": self.check, "verdict": self.verdict, "depth": self.depth,
             "counterexample": list(self.counterexample),
             "decoded_trace": list(self.decoded_trace)}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class VerificationReport:
    header: dict = field(default_factory=dict)
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.verdict != FAIL for r in self.results)

    def as_dict(self) -> dict:
        return {"header": self.header, "checks": [r.as_dict() for r in self.results]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def _render(t: Tdes, s: str) -> str:
    d = t.decode.get(s)
    return d.render() if hasattr(d, "render") else str(d if d is not None else s)


def decoded_trace(t: Tdes, word) -> list[str]:
    s = t.initial
    out = [f"{s} {_render(t, s)}"]
    for ev in word:
        s = t.step(s, ev)
        if s is None:
            out.append(f"<{ev} not enabled>")
            break
        out.append(f"{s} {_render(t, s)}")
    return out


def _verdict_from_bad(name: str, t: Tdes, bad) -> CheckResult:
    if not bad:
        return CheckResult(name, PASS)
    word = list(shortest_path(t, bad) or ())
    return CheckResult(name, FAIL, counterexample=word, decoded_trace=decoded_trace(t, word))


def verify_nonblocking(nsp: Tdes) -> CheckResult:
    return _verdict_from_bad("nonblocking", nsp, blocking_states(nsp))


def verify_tlf(nsp: Tdes) -> CheckResult:
    return _verdict_from_bad("time-lock freedom", nsp, timelock_states(nsp))


def controllability_violations(nsp: Tdes, g: Tdes, events: EventTable,
                               enabling_forcible: bool = True) -> list[tuple[str, str]]:
    """``(state, refused event)`` pairs over reachable states of ``nsp``."""
    preempt = forcible_alphabet(events, enabling_forcible) | events.observed_events
    bad = []
    for z in nsp.states:
        a = nsp.decode[z].a
        here = nsp.delta.get(z, {})
        for ev in sorted(g.delta.get(a, {}), key=natural_key):
            if ev == TICK:
                if TICK not in here and not any(e in preempt for e in here):
                    bad.append((z, TICK))
            elif ev in events.uncontrollable and ev not in here:
                bad.append((z, ev))
    return bad


def verify_controllability(nsp: Tdes, g: Tdes, events: EventTable,
                           enabling_forcible: bool = True) -> CheckResult:
    bad = controllability_violations(nsp, g, events, enabling_forcible)
    if not bad:
        return CheckResult("timed networked controllability", PASS)
    z, ev = bad[0]
    word = list(shortest_path(nsp, {z}) or ()) + [ev]
    return CheckResult("timed networked controllability", FAIL, counterexample=word,
                       decoded_trace=decoded_trace(nsp, word[:-1]),
                       detail=f"{ev} refused at {z}")


def verify_safety(nsp: Tdes, r: Tdes) -> CheckResult:
    ok, witness = language_included(nsp, r, nsp.alphabet & r.alphabet)
    if ok:
        return CheckResult("safety", PASS)
    # replay the shortest projected witness on nsp for the decoded view
    word = _lift(nsp, witness, nsp.alphabet & r.alphabet)
    return CheckResult("safety", FAIL, counterexample=list(word),
                       decoded_trace=decoded_trace(nsp, word))


def _lift(t: Tdes, projected, alphabet) -> list[str]:
    """Shortest word of ``t`` whose projection on ``alphabet`` is ``projected``."""
    from collections import deque
    target = tuple(projected)
    start = (t.initial, 0)
    seen = {start}
    queue = deque([(start, [])])
    while queue:
        (s, k), word = queue.popleft()
        if k == len(target):
            return word
        for ev in sorted(t.delta.get(s, {}), key=natural_key):
            d = t.delta[s][ev]
            if ev in alphabet:
                if ev != target[k]:
                    continue
                nxt = (d, k + 1)
            else:
                nxt = (d, k)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + [ev]))
    return list(target)


def is_proper(nsp: Tdes, g: Tdes, events: EventTable, enabling_forcible: bool = True) -> bool:
    return (not blocking_states(nsp) and not timelock_states(nsp)
            and not controllability_violations(nsp, g, events, enabling_forcible))


def candidate_supervisors(np: Tdes, events: EventTable, enabling_forcible: bool = True,
                          prune: bool = True):
    """Sub-automata of the observer of ``np`` obtained by dropping enabling
    or tick edges at reachable observer states.  Observed events are kept.

    With ``prune`` a tick edge is only dropped where something could preempt
    it.  Elsewhere dropping it either refuses a plant tick outright or never
    changes the composed behaviour, so no distinct proper candidate is lost.
    """
    observer = natural_projection(np, events.supervisor_alphabet & np.alphabet | {TICK}, name="candidate")
    ctrl = events.enabling_events | {TICK}
    preempt = forcible_alphabet(events, enabling_forcible)
    delta = observer.delta

    def justified(y, keep):
        return (not prune or TICK in keep or TICK not in delta.get(y, {}) or events.forcible
                or any(e in events.observed_events for e in delta[y])
                or any(e in preempt for e in keep))

    def dfs(frontier, decided):
        if not frontier:
            yield decided
            return
        y, rest = frontier[0], frontier[1:]
        opts = [e for e in sorted(delta.get(y, {}), key=natural_key) if e in ctrl]
        for r in range(len(opts), -1, -1):
            for keep in itertools.combinations(opts, r):
                if not justified(y, keep):
                    continue
                dec = dict(decided)
                dec[y] = frozenset(keep)
                succ = [delta[y][e] for e in sorted(delta.get(y, {}), key=natural_key)
                        if e in keep or e not in ctrl]
                new = [s for s in dict.fromkeys(succ) if s not in dec and s not in rest]
                yield from dfs(rest + new, dec)

    for decided in dfs([observer.initial], {}):
        trans = [(s, e, d) for s, e, d in observer.transitions
                 if s in decided and (e not in ctrl or e in decided[s])]
        yield reach(Tdes.build("candidate", list(observer.states), observer.alphabet, trans,
                               observer.initial, observer.marked))


def oracle_max_permissive(np: Tdes, g: Tdes, events: EventTable, cfg: NetworkConfig,
                          supervisor: Tdes | None, budget: int = 12) -> CheckResult:
    """Brute-force search for a proper supervisor that lets the plant do more.

    Plant-projected languages are compared exactly, not up to a depth.
    ``supervisor=None`` means synthesis found nothing, so any proper candidate
    is a violation.
    """
    name = "maximal permissiveness (bounded oracle)"
    n_enabling = sum(1 for _, e, _ in np.transitions if e in events.enabling_events)
    if n_enabling > budget:
        return CheckResult(name, NOT_EVALUATED,
                           detail=f"{n_enabling} enabling transitions exceed budget {budget}")
    reference = None
    if supervisor is not None:
        reference = compose(supervisor, g, events, cfg)
    checked = 0
    for cand in candidate_supervisors(np, events, cfg.enabling_forcible):
        checked += 1
        nsp = compose(cand, g, events, cfg)
        if not is_proper(nsp, g, events, cfg.enabling_forcible):
            continue
        if reference is None:
            return CheckResult(name, FAIL, detail=f"proper candidate with {len(cand)} states exists")
        ok, witness = language_included(nsp, reference, g.alphabet)
        if not ok:
            return CheckResult(name, FAIL, counterexample=list(witness),
                               detail="candidate allows a plant word the synthesized supervisor does not")
    return CheckResult(name, PASS, detail=f"{checked} candidates enumerated")


def verify_all(nsp: Tdes, g: Tdes, events: EventTable, enabling_forcible: bool = True,
               requirement: Tdes | None = None) -> list[CheckResult]:
    out = [verify_nonblocking(nsp), verify_tlf(nsp),
           verify_controllability(nsp, g, events, enabling_forcible)]
    if requirement is not None:
        out.append(verify_safety(nsp, requirement))
    return out
