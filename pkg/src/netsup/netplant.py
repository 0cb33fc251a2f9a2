"""Networked plant construction.

The networked plant models everything the plant can do when commands reach
it ``Nc`` ticks after being issued and observations reach the supervisor
``No`` ticks after the plant executed the event.  A predictive copy of the
plant (uncontrollable events erased) is run ``Nc`` ticks ahead to decide
which enabling commands may be issued.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

from .channels import ControlChannel, ObservationChannel
from .events import TICK, EventTable
from .tdes import Tdes, minimize, natural_key, natural_projection, reachable_states

log = logging.getLogger(__name__)

TICK_RULES = ("guarded", "figure", "literal")


class AssumptionError(ValueError):
    """A plant violates a channel-adequacy assumption in strict mode."""


@dataclass(frozen=True)
class NetworkConfig:
    nc: int = 1
    no: int = 1
    lmax: int = 1
    mmax: int = 1
    fifo_control: bool = True
    tick_rule: str = "guarded"
    enabling_forcible: bool = True
    strict: bool = False

    def __post_init__(self):
        for name in ("nc", "no", "lmax", "mmax"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.tick_rule not in TICK_RULES:
            raise ValueError(f"tick_rule must be one of {TICK_RULES}")

    def as_dict(self) -> dict:
        return {
            "nc": self.nc, "no": self.no, "lmax": self.lmax, "mmax": self.mmax,
            "control_channel": "fifo" if self.fifo_control else "non-fifo",
            "tick_rule": self.tick_rule,
            "enabling_forcible": self.enabling_forcible,
            "strict_assumptions": self.strict,
        }

    def control_channel(self, events: EventTable) -> ControlChannel:
        return ControlChannel(self.nc, self.lmax, self.fifo_control, (), events.controllable)

    def observation_channel(self, events: EventTable) -> ObservationChannel:
        return ObservationChannel(self.no, self.mmax, (), frozenset(events.active))


@dataclass(frozen=True)
class NpState:
    a: str
    pred: str
    m: ObservationChannel
    l: ControlChannel

    def render(self) -> str:
        return f"({self.a},{self.pred},{self.m.render()},{self.l.render()})"


@dataclass
class BuildDiagnostics:
    control_drops: list[tuple[str, str]] = field(default_factory=list)
    observation_drops: list[tuple[str, str]] = field(default_factory=list)
    prediction_stalls: int = 0
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "control_drops": [list(d) for d in self.control_drops],
            "observation_drops": [list(d) for d in self.observation_drops],
            "prediction_stalls": self.prediction_stalls,
            "warnings": list(self.warnings),
        }


def predict_base(g: Tdes, events: EventTable) -> Tdes:
    """The plant with uncontrollable active events erased.

    The projection is language-minimized: only its transition function is
    used for look-ahead, and merging language-equivalent subset-states keeps
    the networked plant free of duplicate predictions.
    """
    keep = (events.controllable | {TICK}) & g.alphabet
    proj = natural_projection(g, keep, name=f"{g.name}'")
    return minimize(proj, name=f"{g.name}'")


def check_assumption1(g: Tdes, events: EventTable, cfg: NetworkConfig):
    """At least ``Nc`` ticks before the first controllable event.

    Returns ``(ok, witness)`` where the witness is a shortest violating word.
    """
    if cfg.nc == 0:
        return True, None
    start = (g.initial, 0)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (s, ticks), word = queue.popleft()
        for ev in sorted(g.delta.get(s, {}), key=natural_key):
            if ev in events.controllable:
                if ticks < cfg.nc:
                    return False, word + (ev,)
                continue
            nxt = (g.delta[s][ev], min(ticks + (ev == TICK), cfg.nc))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (ev,)))
    return True, None


def _max_window(g: Tdes, counted: frozenset[str], tick_budget: int) -> float:
    """Largest number of ``counted`` events in a substring of L(g) with at
    most ``tick_budget`` ticks; ``math.inf`` if unbounded."""
    starts = [(s, 0) for s in reachable_states(g)]
    succ: dict[tuple, list[tuple[tuple, int]]] = {}
    seen = set(starts)
    stack = list(starts)
    while stack:
        node = stack.pop()
        s, t = node
        out = []
        for ev, d in g.delta.get(s, {}).items():
            nt = t + (ev == TICK)
            if nt > tick_budget:
                continue
            nxt = (d, nt)
            out.append((nxt, int(ev in counted)))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
        succ[node] = out

    # Tarjan SCC, iterative
    index: dict = {}
    low: dict = {}
    on_stack = set()
    st: list = []
    comp: dict = {}
    counter = 0
    ncomp = 0
    for root in succ:
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        st.append(root)
        on_stack.add(root)
        while work:
            node, i = work[-1]
            edges = succ[node]
            if i < len(edges):
                work[-1] = (node, i + 1)
                nxt = edges[i][0]
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    st.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, 0))
                elif nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    while True:
                        v = st.pop()
                        on_stack.discard(v)
                        comp[v] = ncomp
                        if v == node:
                            break
                    ncomp += 1
    for node, edges in succ.items():
        for nxt, w in edges:
            if w and comp[node] == comp[nxt]:
                return math.inf
    # Tarjan numbers components in reverse topological order
    best = [0] * ncomp
    members: dict[int, list] = {}
    for node, c in comp.items():
        members.setdefault(c, []).append(node)
    # value(c) = max over edges leaving c of w + value(target)
    for c in range(ncomp):
        val = 0
        for node in members.get(c, ()):
            for nxt, w in succ[node]:
                tc = comp[nxt]
                if tc == c:
                    continue
                val = max(val, w + best[tc])
        best[c] = val
    return max(best, default=0)


def check_assumption2(g: Tdes, events: EventTable, cfg: NetworkConfig):
    """Required control-channel capacity and whether ``Lmax`` meets it."""
    need = _max_window(g, events.controllable, max(cfg.nc - 1, 0))
    return need, need <= cfg.lmax


def required_mmax(g: Tdes, events: EventTable, cfg: NetworkConfig):
    """Observation-channel capacity that avoids any dropped observation."""
    need = _max_window(g, frozenset(events.active), cfg.no)
    return need, need <= cfg.mmax


def _tick_allowed(rule, pred, a_pred, pred_after_tick, controllable) -> bool:
    """Gate on tick from the predictor's point of view.

    ``figure``: never gated.  ``literal``: gated whenever a controllable event
    is enabled at ``a_pred``.  ``guarded``: gated only when ``a_pred`` cannot
    tick but can still be advanced by a command, i.e. a command is due now.
    """
    if rule == "figure":
        return True
    commandable = any(pred.step(a_pred, s) is not None for s in controllable)
    if rule == "literal":
        return not commandable
    return pred_after_tick is not None or not commandable


def build_networked_plant(g: Tdes, events: EventTable, cfg: NetworkConfig,
                          diagnostics: BuildDiagnostics | None = None) -> Tdes:
    """Explicit-state construction of the networked plant by BFS.

    States are numbered ``x0, x1, ...`` in BFS order and decode to
    :class:`NpState`.
    """
    diag = diagnostics if diagnostics is not None else BuildDiagnostics()
    ok1, witness = check_assumption1(g, events, cfg)
    if not ok1:
        msg = f"initial tick assumption violated: a controllable event needs Nc ticks first: {' '.join(witness)}"
        if cfg.strict:
            raise AssumptionError(msg)
        diag.warnings.append(msg)
        log.warning(msg)
    need, ok2 = check_assumption2(g, events, cfg)
    if not ok2:
        msg = f"control capacity assumption violated: control channel needs capacity {need}, Lmax={cfg.lmax}"
        if cfg.strict:
            raise AssumptionError(msg)
        diag.warnings.append(msg)
        log.warning(msg)

    pred = predict_base(g, events)
    a_pred = pred.run([TICK] * cfg.nc)
    if a_pred is None:
        raise AssumptionError(f"the plant cannot perform {cfg.nc} initial ticks")

    controllable = sorted(events.controllable, key=natural_key)
    uncontrollable = events.uncontrollable
    enab = {s: events.enabling(s) for s in controllable}
    obsv = {s: events.observed(s) for s in events.active}

    start = NpState(g.initial, a_pred, cfg.observation_channel(events), cfg.control_channel(events))
    index = {start: "x0"}
    order = [start]
    queue = deque([start])
    transitions = []

    def add(src, ev, dst):
        if dst not in index:
            index[dst] = f"x{len(index)}"
            order.append(dst)
            queue.append(dst)
        transitions.append((index[src], ev, index[dst]))

    while queue:
        x = queue.popleft()
        moves = []
        # 1) enabling commands predicted Nc ticks ahead
        for s in controllable:
            nxt_pred = pred.step(x.pred, s)
            if nxt_pred is not None:
                l2, dropped = x.l.app(s)
                if dropped:
                    diag.control_drops.append((index[x], enab[s]))
                moves.append((enab[s], NpState(x.a, nxt_pred, x.m, l2)))
        # 2) and 3) plant events
        for ev, a2 in g.delta.get(x.a, {}).items():
            if ev == TICK:
                continue
            if ev in uncontrollable:
                l2 = x.l
            elif x.l.ready(ev):
                l2 = x.l.consume(ev)
            else:
                continue
            m2, dropped = x.m.insert(ev)
            if dropped:
                diag.observation_drops.append((index[x], ev))
            moves.append((ev, NpState(a2, x.pred, m2, l2)))
        # 4) tick, preempted by ready observations
        a2 = g.step(x.a, TICK)
        p2 = pred.step(x.pred, TICK)
        if a2 is not None and not x.m.ready() and _tick_allowed(cfg.tick_rule, pred, x.pred, p2, controllable):
            if p2 is None:
                diag.prediction_stalls += 1
                p2 = x.pred
            moves.append((TICK, NpState(a2, p2, x.m.dec(), x.l.dec())))
        # 5) observations
        for s in sorted(x.m.ready(), key=natural_key):
            moves.append((obsv[s], NpState(x.a, x.pred, x.m.remove(s), x.l)))
        for ev, dst in sorted(moves, key=lambda mv: natural_key(mv[0])):
            add(x, ev, dst)

    return Tdes.build(
        f"NP({g.name})",
        [index[x] for x in order],
        events.networked_alphabet & (g.alphabet | events.enabling_events | events.observed_events),
        transitions,
        "x0",
        {index[x] for x in order if x.a in g.marked},
        {index[x]: x for x in order},
    )
