"""Graphviz export.

Uncontrollable transitions are dashed.  A tick edge counts as uncontrollable
unless a forcible event is enabled at its source.  Forcible event labels are
underlined.
"""
from __future__ import annotations

from .events import TICK
from .tdes import Tdes


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _html(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def to_dot(t: Tdes, uncontrollable=frozenset(), forcible=frozenset()) -> str:
    """Render ``t``.  ``uncontrollable`` and ``forcible`` are event sets."""
    lines = [f"digraph {_quote(t.name)} {{", "  rankdir=LR;", "  node [shape=circle];",
             '  "__start" [shape=point, label=""];', f"  \"__start\" -> {_quote(t.initial)};"]
    for s in t.states:
        shape = "doublecircle" if s in t.marked else "circle"
        lines.append(f"  {_quote(s)} [shape={shape}];")
    for src, ev, dst in t.transitions:
        attrs = []
        if ev in forcible:
            attrs.append(f"label=<<u>{_html(ev)}</u>>")
        else:
            attrs.append(f"label={_quote(ev)}")
        if ev == TICK:
            dashed = not any(e in forcible for e in t.delta.get(src, {}))
        else:
            dashed = ev in uncontrollable
        if dashed:
            attrs.append("style=dashed")
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
