"""Asynchronous composition of a networked supervisor with its plant."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .events import TICK, EventTable
from .netplant import BuildDiagnostics, NetworkConfig
from .channels import ControlChannel, ObservationChannel
from .tdes import Tdes, natural_key


@dataclass(frozen=True)
class NspState:
    a: str
    y: str
    m: ObservationChannel
    l: ControlChannel

    def render(self) -> str:
        return f"({self.a},{self.y},{self.m.render()},{self.l.render()})"


def _moves(g: Tdes, ns: Tdes, events: EventTable, z: NspState, diag: BuildDiagnostics | None = None):
    """Successors of ``z`` as ``(event, state)`` pairs in canonical order."""
    out = []
    for s in sorted(events.controllable, key=natural_key):
        y2 = ns.step(z.y, events.enabling(s))
        if y2 is not None:
            l2, dropped = z.l.app(s)
            if dropped and diag is not None:
                diag.control_drops.append((z.render(), events.enabling(s)))
            out.append((events.enabling(s), NspState(z.a, y2, z.m, l2)))
    for ev, a2 in g.delta.get(z.a, {}).items():
        if ev == TICK:
            continue
        if ev in events.uncontrollable:
            l2 = z.l
        elif z.l.ready(ev):
            l2 = z.l.consume(ev)
        else:
            continue
        m2, dropped = z.m.insert(ev)
        if dropped and diag is not None:
            diag.observation_drops.append((z.render(), ev))
        out.append((ev, NspState(a2, z.y, m2, l2)))
    a2, y2 = g.step(z.a, TICK), ns.step(z.y, TICK)
    if a2 is not None and y2 is not None and not z.m.ready():
        out.append((TICK, NspState(a2, y2, z.m.dec(), z.l.dec())))
    for s in sorted(z.m.ready(), key=natural_key):
        y2 = ns.step(z.y, events.observed(s))
        if y2 is not None:
            out.append((events.observed(s), NspState(z.a, y2, z.m.remove(s), z.l)))
    out.sort(key=lambda mv: natural_key(mv[0]))
    return out


def initial_state(g: Tdes, ns: Tdes, events: EventTable, cfg: NetworkConfig) -> NspState:
    return NspState(g.initial, ns.initial, cfg.observation_channel(events), cfg.control_channel(events))


def compose(ns: Tdes, g: Tdes, events: EventTable, cfg: NetworkConfig,
            diagnostics: BuildDiagnostics | None = None) -> Tdes:
    """The networked supervised plant, states ``z0, z1, ...`` in BFS order."""
    start = initial_state(g, ns, events, cfg)
    index = {start: "z0"}
    order = [start]
    queue = deque([start])
    transitions = []
    while queue:
        z = queue.popleft()
        for ev, z2 in _moves(g, ns, events, z, diagnostics):
            if z2 not in index:
                index[z2] = f"z{len(index)}"
                order.append(z2)
                queue.append(z2)
            transitions.append((index[z], ev, index[z2]))
    return Tdes.build(
        f"NSP({ns.name},{g.name})",
        [index[z] for z in order],
        ns.alphabet | g.alphabet,
        transitions,
        "z0",
        {index[z] for z in order if z.a in g.marked and z.y in ns.marked},
        {index[z]: z for z in order},
    )


class Simulator:
    """Step-by-step execution of the composition, with a trace log."""

    def __init__(self, ns: Tdes, g: Tdes, events: EventTable, cfg: NetworkConfig):
        self.ns, self.g, self.events = ns, g, events
        self.state = initial_state(g, ns, events, cfg)
        self.step_count = 0
        self.trace: list[str] = []

    def enabled(self) -> list[str]:
        return [ev for ev, _ in _moves(self.g, self.ns, self.events, self.state)]

    def step(self, event: str) -> NspState:
        for ev, z2 in _moves(self.g, self.ns, self.events, self.state):
            if ev == event:
                self.trace.append(trace_line(self.step_count, event, z2))
                self.state = z2
                self.step_count += 1
                return z2
        enabled = ", ".join(self.enabled()) or "none"
        raise ValueError(f"event {event!r} not enabled at {self.state.render()}; enabled: {{{enabled}}}")

    def run(self, word) -> NspState:
        for ev in word:
            self.step(ev)
        return self.state


def trace_line(step: int, event: str, z: NspState) -> str:
    return f"{step} | {event} | {z.render()}"


def simulate_step(nsp: Tdes, s: str, event: str) -> tuple[str, str, str]:
    """One edge of a built composition: ``(successor, source view, target view)``."""
    if s not in nsp.delta:
        raise ValueError(f"unknown state {s!r}")
    d = nsp.step(s, event)
    if d is None:
        enabled = ", ".join(nsp.enabled(s)) or "none"
        raise ValueError(f"event {event!r} not enabled at {s}; enabled: {{{enabled}}}")
    return d, _view(nsp, s), _view(nsp, d)


def _view(t: Tdes, s: str) -> str:
    v = t.decode.get(s)
    return v.render() if hasattr(v, "render") else s
