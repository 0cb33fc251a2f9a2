"""Networked supervisor synthesis by iterative bad-state removal."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .events import TICK, EventTable
from .observation import ObsRelation, obs_relation
from .tdes import (Tdes, blocking_states, natural_key, natural_projection,
                   reach, timelock_states)

log = logging.getLogger(__name__)

BAD_SETS = ("both", "blocking", "tlf")
UNCON_RULES = ("intersection", "literal")


@dataclass(frozen=True)
class SynthesisOptions:
    enabling_forcible: bool = True
    bad_set: str = "both"
    uncon_rule: str = "intersection"

    def __post_init__(self):
        if self.bad_set not in BAD_SETS:
            raise ValueError(f"bad_set must be one of {BAD_SETS}")
        if self.uncon_rule not in UNCON_RULES:
            raise ValueError(f"uncon_rule must be one of {UNCON_RULES}")


@dataclass
class Iteration:
    index: int
    bad: list[str]
    uncon: list[str]
    disabled: list[tuple[str, str]]
    states_left: int

    def as_dict(self) -> dict:
        return {"iteration": self.index, "bad": self.bad, "uncon": self.uncon,
                "disabled": [list(d) for d in self.disabled], "states_left": self.states_left}


@dataclass
class SynthesisOutcome:
    supervisor: Tdes | None
    final: Tdes | None = None
    iterations: list[Iteration] = field(default_factory=list)
    chain: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.supervisor is not None

    def log_lines(self) -> list[str]:
        lines = []
        for it in self.iterations:
            lines.append(f"iteration {it.index}: bad={{{','.join(it.bad)}}}")
            lines.append(f"  uncon={{{','.join(it.uncon)}}}")
            lines.append("  disabled=" + " ".join(f"{y}:{e}" for y, e in it.disabled))
            lines.append(f"  states_left={it.states_left}")
        if self.found:
            lines.append(f"result: supervisor with {len(self.supervisor)} states")
        else:
            lines.append("result: no result (initial state uncontrollably reaches bad set)")
            for y, ev, d in self.chain:
                lines.append(f"  {y} --{ev}--> {d}")
        return lines


def forcible_alphabet(events: EventTable, enabling_forcible: bool = True) -> frozenset[str]:
    f = events.forcible
    return f | events.enabling_events if enabling_forcible else f


def uncontrollable_alphabet(events: EventTable) -> frozenset[str]:
    return frozenset(events.active) | events.observed_events


def observable_alphabet(events: EventTable) -> frozenset[str]:
    return events.supervisor_alphabet


def _forcible_at(t: Tdes, y: str, forcible: frozenset[str]) -> frozenset[str]:
    return frozenset(e for e in t.delta.get(y, {}) if e in forcible)


def bad_states(ns: Tdes, bad_set: str = "both") -> set[str]:
    out: set[str] = set()
    if bad_set in ("both", "blocking"):
        out |= blocking_states(ns)
    if bad_set in ("both", "tlf"):
        out |= timelock_states(ns)
    return out


def uncon_closure(ns: Tdes, bs, obs: ObsRelation, events: EventTable,
                  opts: SynthesisOptions = SynthesisOptions(),
                  parents: dict | None = None) -> set[str]:
    """Least set containing ``bs`` and closed under uncontrollable and
    non-preemptable tick predecessors."""
    unc = uncontrollable_alphabet(events)
    forcible = forcible_alphabet(events, opts.enabling_forcible)
    F = {y: _forcible_at(ns, y, forcible) for y in ns.states}

    def tick_unpreemptable(y):
        if opts.uncon_rule == "literal":
            return not F[y]
        common = None
        for y2 in obs.of(y) or {y}:
            common = F.get(y2, frozenset()) if common is None else common & F.get(y2, frozenset())
            if not common:
                return True
        return not common

    preds: dict[str, list[tuple[str, str]]] = {}
    for y, ev, d in ns.transitions:
        if ev in unc or ev == TICK:
            preds.setdefault(d, []).append((y, ev))
    result = set(bs)
    work = sorted(result, key=natural_key)
    while work:
        d = work.pop()
        for y, ev in preds.get(d, ()):
            if y in result:
                continue
            if ev == TICK and not tick_unpreemptable(y):
                continue
            result.add(y)
            if parents is not None:
                parents[y] = (ev, d)
            work.append(y)
    return result


def bpre(ns: Tdes, np: Tdes, events: EventTable, enabling_forcible: bool = True) -> set[str]:
    forcible = forcible_alphabet(events, enabling_forcible)
    out = set()
    for y in ns.states:
        if _forcible_at(ns, y, forcible):
            continue
        if ns.step(y, TICK) is None and np.step(y, TICK) is not None:
            out.add(y)
    return out


def _rebuild(base: Tdes, states, delta) -> Tdes:
    keep = set(states)
    trans = [(s, e, d) for s in base.states if s in keep
             for e, d in delta.get(s, {}).items() if d in keep]
    t = Tdes.build(base.name, [s for s in base.states if s in keep], base.alphabet, trans,
                   base.initial, base.marked & keep, base.decode)
    return reach(t)


def _rename(t: Tdes, prefix: str, name: str) -> Tdes:
    order = list(t.states)
    names = {s: f"{prefix}{i}" for i, s in enumerate(order)}
    return Tdes.build(name, [names[s] for s in order], t.alphabet,
                      [(names[a], e, names[b]) for a, e, b in t.transitions],
                      names[t.initial], {names[s] for s in t.marked},
                      {names[s]: t.decode.get(s, s) for s in order})


def synthesize(np: Tdes, events: EventTable, opts: SynthesisOptions = SynthesisOptions()) -> SynthesisOutcome:
    """Compute a networked supervisor for ``np`` or report that none exists."""
    observable = observable_alphabet(events) & np.alphabet | {TICK}
    disablable = (events.enabling_events & np.alphabet) | {TICK}
    ns = reach(np)
    delta = {s: dict(m) for s, m in ns.delta.items()}
    outcome = SynthesisOutcome(None)
    bs = bad_states(ns, opts.bad_set)
    i = 0
    while bs:
        obs = obs_relation(ns, observable)
        parents: dict = {}
        unc = uncon_closure(ns, bs, obs, events, opts, parents)
        if ns.initial in unc:
            chain, y = [], ns.initial
            while y in parents and len(chain) <= len(ns):
                ev, d = parents[y]
                chain.append((y, ev, d))
                y = d
            outcome.chain = chain
            outcome.iterations.append(Iteration(i + 1, sorted(bs, key=natural_key),
                                                sorted(unc, key=natural_key), [], len(ns)))
            log.info("no result: initial state is bad")
            return outcome
        bad_view = obs.of_set(unc)
        # collect every trigger first so the outcome does not depend on visit order
        triggers = set()
        for y in ns.states:
            if y in unc:
                continue
            for ev, d in ns.delta.get(y, {}).items():
                if ev in disablable and d in bad_view:
                    triggers.add((y, ev))
        disabled = set()
        for y, ev in triggers:
            for y2 in obs.of(y) | {y}:
                if ev in delta.get(y2, {}):
                    del delta[y2][ev]
                    disabled.add((y2, ev))
        i += 1
        ns = _rebuild(np, [s for s in ns.states if s not in unc], delta)
        outcome.iterations.append(Iteration(
            i, sorted(bs, key=natural_key), sorted(unc, key=natural_key),
            sorted(disabled, key=lambda d: (natural_key(d[0]), natural_key(d[1]))), len(ns)))
        bs = bpre(ns, np, events, opts.enabling_forcible) | bad_states(ns, opts.bad_set)
    outcome.final = ns
    proj = natural_projection(ns, observable, name="NS")
    outcome.supervisor = _rename(proj, "y", f"NS({np.name})")
    return outcome
