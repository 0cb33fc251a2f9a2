"""Deterministic timed automata and the classical operations on them."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Iterable, Mapping

from .events import TICK, EventTable

Word = tuple[str, ...]


def natural_key(name: str):
    """Sort key that orders ``x2`` before ``x10``."""
    return [(0, int(tok), "") if tok.isdigit() else (1, 0, tok)
            for tok in re.split(r"(\d+)", name) if tok]


@dataclass(frozen=True)
class Tdes:
    """A finite automaton whose alphabet contains ``tick``.

    ``transitions`` is kept as an ordered tuple of ``(src, event, dst)`` so
    that malformed input (e.g. nondeterminism) survives until ``validate``
    reports it.  ``decode`` maps state names to composite payloads and is
    opaque to this module.
    """

    name: str
    states: tuple[str, ...]
    alphabet: frozenset[str]
    transitions: tuple[tuple[str, str, str], ...]
    initial: str
    marked: frozenset[str]
    decode: Mapping[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def build(cls, name, states, alphabet, transitions, initial, marked=(), decode=None):
        return cls(
            name=name,
            states=tuple(states),
            alphabet=frozenset(alphabet) | {TICK},
            transitions=tuple(tuple(t) for t in transitions),
            initial=initial,
            marked=frozenset(marked),
            decode=dict(decode or {}),
        )

    @cached_property
    def delta(self) -> dict[str, dict[str, str]]:
        out: dict[str, dict[str, str]] = {s: {} for s in self.states}
        for src, ev, dst in self.transitions:
            out.setdefault(src, {}).setdefault(ev, dst)
        return out

    def step(self, state: str, event: str) -> str | None:
        return self.delta.get(state, {}).get(event)

    def run(self, word: Iterable[str], start: str | None = None) -> str | None:
        state = self.initial if start is None else start
        for ev in word:
            state = self.step(state, ev)
            if state is None:
                return None
        return state

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) is not None

    def enabled(self, state: str) -> list[str]:
        return sorted(self.delta.get(state, {}))

    def with_name(self, name: str) -> "Tdes":
        return replace(self, name=name)

    def __len__(self):
        return len(self.states)


def validate(t: Tdes, events: EventTable | None = None) -> list[str]:
    """Return a list of well-formedness violations; empty means valid."""
    problems = []
    states = set(t.states)
    if len(states) != len(t.states):
        problems.append("duplicate state names")
    if TICK not in t.alphabet:
        problems.append("tick absent from alphabet")
    if t.initial not in states:
        problems.append(f"initial state {t.initial!r} is not a state")
    for s in sorted(t.marked - states):
        problems.append(f"marked state {s!r} is not a state")
    seen: dict[tuple[str, str], str] = {}
    for src, ev, dst in t.transitions:
        for end in (src, dst):
            if end not in states:
                problems.append(f"transition ({src},{ev},{dst}) uses unknown state {end!r}")
        if ev not in t.alphabet:
            problems.append(f"transition ({src},{ev},{dst}) uses event {ev!r} outside the alphabet")
        if (src, ev) in seen and seen[(src, ev)] != dst:
            problems.append(
                f"nondeterminism at state {src!r} on {ev!r}: {seen[(src, ev)]!r} and {dst!r}")
        elif (src, ev) in seen:
            problems.append(f"duplicate transition ({src},{ev},{dst})")
        seen.setdefault((src, ev), dst)
    if events is not None:
        problems.extend(events.diagnostics())
        for ev in sorted(t.alphabet - events.networked_alphabet):
            problems.append(f"event {ev!r} is not declared in the event table")
    return problems


def reachable_states(t: Tdes, start: str | None = None) -> list[str]:
    start = t.initial if start is None else start
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for ev in sorted(t.delta.get(s, {})):
            d = t.delta[s][ev]
            if d not in seen:
                seen.add(d)
                order.append(d)
                queue.append(d)
    return order


def reach(t: Tdes) -> Tdes:
    """Restrict ``t`` to the states reachable from its initial state."""
    keep = set(reachable_states(t))
    return replace(
        t,
        states=tuple(s for s in t.states if s in keep),
        transitions=tuple(tr for tr in t.transitions if tr[0] in keep),
        marked=t.marked & keep,
        decode={s: v for s, v in t.decode.items() if s in keep},
    )


def _backward(t: Tdes, targets: Iterable[str]) -> set[str]:
    preds: dict[str, set[str]] = {}
    for src, _, dst in t.transitions:
        preds.setdefault(dst, set()).add(src)
    seen = set(targets)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for p in preds.get(s, ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def blocking_states(t: Tdes) -> set[str]:
    """Reachable states from which no marked state can be reached."""
    return set(reachable_states(t)) - _backward(t, t.marked)


def timelock_states(t: Tdes) -> set[str]:
    """Reachable states from which no ``tick`` can ever occur."""
    ticking = {src for src, ev, _ in t.transitions if ev == TICK}
    return set(reachable_states(t)) - _backward(t, ticking)


def is_nonblocking(t: Tdes) -> bool:
    return not blocking_states(t)


def is_timelock_free(t: Tdes) -> bool:
    return not timelock_states(t)


def sync_product(a: Tdes, b: Tdes, name: str | None = None) -> Tdes:
    """Synchronous product; only the reachable part is built.

    Result states are numbered ``s0, s1, ...`` in BFS order and decode to
    the pair of component states.
    """
    shared = a.alphabet & b.alphabet
    alphabet = a.alphabet | b.alphabet
    start = (a.initial, b.initial)
    index = {start: "s0"}
    order = [start]
    queue = deque([start])
    transitions = []
    while queue:
        pa, pb = pair = queue.popleft()
        for ev in sorted(alphabet, key=natural_key):
            if ev in shared:
                na, nb = a.step(pa, ev), b.step(pb, ev)
                if na is None or nb is None:
                    continue
            elif ev in a.alphabet:
                na, nb = a.step(pa, ev), pb
                if na is None:
                    continue
            else:
                na, nb = pa, b.step(pb, ev)
                if nb is None:
                    continue
            nxt = (na, nb)
            if nxt not in index:
                index[nxt] = f"s{len(index)}"
                order.append(nxt)
                queue.append(nxt)
            transitions.append((index[pair], ev, index[nxt]))
    marked = {index[p] for p in order if p[0] in a.marked and p[1] in b.marked}
    return Tdes.build(
        name or f"{a.name}||{b.name}",
        [index[p] for p in order],
        alphabet,
        transitions,
        "s0",
        marked,
        {index[p]: p for p in order},
    )


def subset_name(states: Iterable[str]) -> str:
    return "{" + ",".join(sorted(states, key=natural_key)) + "}"


def _closure(t: Tdes, states: Iterable[str], silent: frozenset[str]) -> frozenset[str]:
    seen = set(states)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for ev, d in t.delta.get(s, {}).items():
            if ev in silent and d not in seen:
                seen.add(d)
                stack.append(d)
    return frozenset(seen)


def subset_construction(t: Tdes, keep: Iterable[str]) -> tuple[list[frozenset[str]], list, frozenset]:
    """Determinize ``t`` after erasing every event outside ``keep``.

    Returns the subset-states in BFS order, the transitions between them and
    the kept alphabet.
    """
    keep = frozenset(keep)
    silent = t.alphabet - keep
    start = _closure(t, [t.initial], silent)
    order = [start]
    seen = {start}
    queue = deque([start])
    transitions = []
    while queue:
        cur = queue.popleft()
        moves: dict[str, set[str]] = {}
        for s in cur:
            for ev, d in t.delta.get(s, {}).items():
                if ev in keep:
                    moves.setdefault(ev, set()).add(d)
        for ev in sorted(moves, key=natural_key):
            nxt = _closure(t, moves[ev], silent)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
            transitions.append((cur, ev, nxt))
    return order, transitions, keep


def natural_projection(t: Tdes, keep: Iterable[str], name: str | None = None) -> Tdes:
    """Project ``t`` onto ``keep`` and determinize.

    A projected state is marked iff it contains a marked source state; its
    decode entry is the set of source states.
    """
    keep = frozenset(keep)
    extra = keep - t.alphabet
    if extra:
        raise ValueError(f"projection alphabet not contained in automaton alphabet: {sorted(extra)}")
    order, trans, keep = subset_construction(t, keep)
    names = {s: subset_name(s) for s in order}
    return Tdes.build(
        name or f"P({t.name})",
        [names[s] for s in order],
        keep,
        [(names[a], ev, names[b]) for a, ev, b in trans],
        names[order[0]],
        {names[s] for s in order if s & t.marked},
        {names[s]: s for s in order},
    )


def minimize(t: Tdes, respect_marking: bool = False, name: str | None = None) -> Tdes:
    """Merge states with identical future languages (Moore refinement).

    By default only the generated language is preserved; a merged state is
    marked if any member is marked.  Decode entries are the merged state
    sets (flattened through existing set-valued decodes).
    """
    t = reach(t)
    events = sorted(t.alphabet, key=natural_key)
    if respect_marking:
        block = {s: int(s in t.marked) for s in t.states}
    else:
        block = {s: 0 for s in t.states}
    while True:
        sigs = {
            s: (block[s],) + tuple(block.get(t.step(s, ev), -1) if t.step(s, ev) is not None else -1
                                  for ev in events)
            for s in t.states
        }
        ids: dict[tuple, int] = {}
        for s in t.states:
            ids.setdefault(sigs[s], len(ids))
        new = {s: ids[sigs[s]] for s in t.states}
        if len(ids) == len(set(block.values())):
            block = new
            break
        block = new
    members: dict[int, list[str]] = {}
    for s in t.states:
        members.setdefault(block[s], []).append(s)

    def flat(s):
        d = t.decode.get(s)
        return set(d) if isinstance(d, (set, frozenset)) else {s}

    payload = {b: frozenset().union(*(flat(s) for s in ms)) for b, ms in members.items()}
    names = {b: subset_name(payload[b]) for b in members}
    # keep BFS order of first members
    order = []
    for s in t.states:
        if names[block[s]] not in order:
            order.append(names[block[s]])
    trans = []
    seen = set()
    for src, ev, dst in t.transitions:
        key = (names[block[src]], ev)
        if key not in seen:
            seen.add(key)
            trans.append((names[block[src]], ev, names[block[dst]]))
    marked = {names[block[s]] for s in t.marked}
    return Tdes.build(
        name or t.name,
        order,
        t.alphabet,
        trans,
        names[block[t.initial]],
        marked,
        {names[b]: payload[b] for b in members},
    )


def complete(r: Tdes, dead: str = "q_d") -> Tdes:
    """Route every undefined transition of ``r`` to a fresh unmarked dead state."""
    while dead in r.states:
        dead += "'"
    extra = [
        (s, ev, dead)
        for s in r.states
        for ev in sorted(r.alphabet, key=natural_key)
        if r.step(s, ev) is None
    ]
    return replace(
        r,
        name=f"{r.name}_complete",
        states=r.states + (dead,),
        transitions=r.transitions + tuple(extra),
    )


def bounded_language(t: Tdes, k: int, start: str | None = None) -> set[Word]:
    """All words of length at most ``k`` generated from ``start``."""
    start = t.initial if start is None else start
    words = {()}
    frontier = [((), start)]
    for _ in range(k):
        nxt = []
        for w, s in frontier:
            for ev, d in t.delta.get(s, {}).items():
                nw = w + (ev,)
                words.add(nw)
                nxt.append((nw, d))
        frontier = nxt
    return words


def project_word(word: Iterable[str], keep: Iterable[str]) -> Word:
    keep = set(keep)
    return tuple(e for e in word if e in keep)


def language_included(a: Tdes, b: Tdes, alphabet: Iterable[str]) -> tuple[bool, Word | None]:
    """Check ``P(L(a)) <= P(L(b))`` for the projection onto ``alphabet``.

    Returns ``(True, None)`` or ``(False, w)`` where ``w`` is a shortest
    witness, ties broken lexicographically on event names.
    """
    alphabet = frozenset(alphabet)
    pa = natural_projection(a, alphabet & a.alphabet)
    pb = natural_projection(b, alphabet & b.alphabet)
    start = (pa.initial, pb.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (sa, sb), word = queue.popleft()
        for ev in sorted(pa.delta.get(sa, {})):
            da = pa.delta[sa][ev]
            db = pb.step(sb, ev)
            if db is None:
                return False, word + (ev,)
            if (da, db) not in seen:
                seen.add((da, db))
                queue.append(((da, db), word + (ev,)))
    return True, None


def language_equal(a: Tdes, b: Tdes, alphabet: Iterable[str] | None = None) -> bool:
    if alphabet is None:
        alphabet = a.alphabet | b.alphabet
    return (language_included(a, b, alphabet)[0]
            and language_included(b, a, alphabet)[0])


def marked_language_equal(a: Tdes, b: Tdes) -> bool:
    """Generated and marked languages coincide (both automata deterministic)."""
    start = (a.initial, b.initial)
    seen = {start}
    stack = [start]
    while stack:
        sa, sb = stack.pop()
        if (sa in a.marked) != (sb in b.marked):
            return False
        ea, eb = a.delta.get(sa, {}), b.delta.get(sb, {})
        if set(ea) != set(eb):
            return False
        for ev in ea:
            nxt = (ea[ev], eb[ev])
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def shortest_path(t: Tdes, targets: Iterable[str], start: str | None = None) -> Word | None:
    """Shortest word from ``start`` into ``targets`` (lexicographic ties)."""
    targets = set(targets)
    start = t.initial if start is None else start
    if start in targets:
        return ()
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        s, w = queue.popleft()
        for ev in sorted(t.delta.get(s, {})):
            d = t.delta[s][ev]
            if d in seen:
                continue
            if d in targets:
                return w + (ev,)
            seen.add(d)
            queue.append((d, w + (ev,)))
    return None
