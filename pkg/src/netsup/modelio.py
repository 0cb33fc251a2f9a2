"""Plain-text model files.

Grammar, one directive per line, ``#`` starts a comment::

    tdes <name>
    event <name> {controllable|uncontrollable} [forcible]
    state <name> [initial] [marked]
    trans <src> <event|tick> <dst>

Events come first, then states, then transitions.  ``tick`` is implicit.
"""
from __future__ import annotations

import json
from pathlib import Path

from .events import TICK, Event, EventTable
from .tdes import Tdes, natural_key, subset_name


class ModelParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, source: str = "<string>"):
        self.line, self.column, self.message, self.source = line, column, message, source
        super().__init__(f"{source}:{line}:{column}: {message}")


_SECTIONS = {"event": 1, "state": 2, "trans": 3}


def _tokens(line: str):
    """Whitespace-separated tokens with 1-based start columns."""
    out, i, n = [], 0, len(line)
    while i < n:
        while i < n and line[i].isspace():
            i += 1
        if i >= n:
            break
        j = i
        while j < n and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def parse_model(text: str, source: str = "<string>") -> tuple[Tdes, EventTable]:
    name = None
    events: list[Event] = []
    event_names: set[str] = set()
    states: list[str] = []
    initial = None
    marked: set[str] = set()
    transitions: list[tuple[str, str, str]] = []
    seen_trans: dict[tuple[str, str], tuple[str, int]] = {}
    section = 0

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue

        def err(msg, col=toks[0][1]):
            return ModelParseError(lineno, col, msg, source)

        head, col = toks[0]
        args = toks[1:]
        if name is None:
            if head != "tdes":
                raise err("expected 'tdes <name>' as first directive")
            if len(args) != 1:
                raise err("'tdes' takes exactly one name")
            name = args[0][0]
            continue
        if head == "tdes":
            raise err("duplicate 'tdes' directive")
        if head not in _SECTIONS:
            raise err(f"unknown directive {head!r}")
        if _SECTIONS[head] < section:
            raise err(f"'{head}' after later section; order is event, state, trans")
        section = _SECTIONS[head]

        if head == "event":
            if not 2 <= len(args) <= 3:
                raise err("usage: event <name> {controllable|uncontrollable} [forcible]")
            ename, kind = args[0][0], args[1][0]
            if ename == TICK:
                raise err("tick is implicit and must not be declared", args[0][1])
            if ename in event_names:
                raise err(f"duplicate event {ename!r}", args[0][1])
            if kind not in ("controllable", "uncontrollable"):
                raise err(f"expected controllable or uncontrollable, got {kind!r}", args[1][1])
            forcible = False
            if len(args) == 3:
                if args[2][0] != "forcible":
                    raise err(f"unexpected {args[2][0]!r}", args[2][1])
                forcible = True
            events.append(Event(ename, kind == "controllable", forcible))
            event_names.add(ename)
        elif head == "state":
            if not args:
                raise err("usage: state <name> [initial] [marked]")
            sname = args[0][0]
            if sname in states:
                raise err(f"duplicate state {sname!r}", args[0][1])
            flags = [a for a, _ in args[1:]]
            for flag, fcol in args[1:]:
                if flag not in ("initial", "marked") or flags.count(flag) > 1:
                    raise err(f"unexpected {flag!r}", fcol)
            if "initial" in flags:
                if initial is not None:
                    raise err(f"second initial state {sname!r}", args[0][1])
                initial = sname
            if "marked" in flags:
                marked.add(sname)
            states.append(sname)
        else:
            if len(args) != 3:
                raise err("usage: trans <src> <event|tick> <dst>")
            (src, c1), (ev, c2), (dst, c3) = args
            if src not in states:
                raise err(f"unknown state {src!r}", c1)
            if ev != TICK and ev not in event_names:
                raise err(f"unknown event {ev!r}", c2)
            if dst not in states:
                raise err(f"unknown state {dst!r}", c3)
            key = (src, ev)
            if key in seen_trans:
                prev_dst, prev_line = seen_trans[key]
                what = "duplicate transition" if prev_dst == dst else "nondeterministic transition"
                raise err(f"{what} {src} {ev} (first on line {prev_line})")
            seen_trans[key] = (dst, lineno)
            transitions.append((src, ev, dst))

    if name is None:
        raise ModelParseError(1, 1, "empty model", source)
    if initial is None:
        raise ModelParseError(1, 1, "no initial state", source)
    table = EventTable(events)
    t = Tdes.build(name, states, event_names, transitions, initial, marked)
    return t, table


def load_model(path) -> tuple[Tdes, EventTable]:
    p = Path(path)
    return parse_model(p.read_text(), str(p))


def emit_model(t: Tdes, events: EventTable) -> str:
    lines = [f"tdes {t.name}"]
    for ev in events:
        if ev.name not in t.alphabet:
            continue
        parts = ["event", ev.name, "controllable" if ev.controllable else "uncontrollable"]
        if ev.forcible:
            parts.append("forcible")
        lines.append(" ".join(parts))
    for s in t.states:
        parts = ["state", s]
        if s == t.initial:
            parts.append("initial")
        if s in t.marked:
            parts.append("marked")
        lines.append(" ".join(parts))
    for src, ev, dst in t.transitions:
        lines.append(f"trans {src} {ev} {dst}")
    return "\n".join(lines) + "\n"


def save_model(t: Tdes, events: EventTable, path) -> None:
    Path(path).write_text(emit_model(t, events))


def networked_events(events: EventTable, enabling_forcible: bool = True) -> EventTable:
    """Event table for automata over the networked alphabet.

    Enabling events are the only controllable ones; active and observed
    events are uncontrollable from the supervisor's side.
    """
    out = []
    for ev in sorted(events, key=lambda e: natural_key(e.name)):
        if ev.controllable:
            out.append(Event(events.enabling(ev.name), True, enabling_forcible))
    for ev in events:
        out.append(ev)
    for ev in sorted(events, key=lambda e: natural_key(e.name)):
        out.append(Event(events.observed(ev.name), False))
    return EventTable(out)


def render_decode(value) -> str:
    if hasattr(value, "render"):
        return value.render()
    if isinstance(value, (frozenset, set)):
        return subset_name(render_decode(v) for v in value)
    if isinstance(value, tuple):
        return "(" + ",".join(render_decode(v) for v in value) + ")"
    return str(value)


def decode_sidecar(t: Tdes) -> str:
    """JSON object mapping each state to its rendered composite meaning."""
    data = {s: render_decode(t.decode[s]) for s in t.states if s in t.decode}
    return json.dumps(data, indent=2) + "\n"
