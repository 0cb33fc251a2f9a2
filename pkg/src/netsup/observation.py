"""Observational equivalence of states under partial observation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .tdes import Tdes, natural_key, subset_construction, subset_name


@dataclass(frozen=True)
class ObsRelation:
    """``classes[x]`` is the sorted tuple of states observationally
    equivalently reachable as ``x``."""

    classes: Mapping[str, tuple[str, ...]]
    observer: Tdes

    def of(self, state: str) -> frozenset[str]:
        return frozenset(self.classes.get(state, ()))

    def of_set(self, states: Iterable[str]) -> frozenset[str]:
        out: set[str] = set()
        for s in states:
            out.update(self.classes.get(s, ()))
        return frozenset(out)

    def __contains__(self, pair):
        x, y = pair
        return y in self.classes.get(x, ())


def obs_relation(t: Tdes, observable: Iterable[str]) -> ObsRelation:
    """Observer by subset construction, silent events outside ``observable``.

    Two states are related when they occur together in some observer state.
    """
    observable = frozenset(observable)
    if not observable <= t.alphabet:
        raise ValueError("observable events must belong to the alphabet")
    subsets, transitions, keep = subset_construction(t, observable)
    rel: dict[str, set[str]] = {}
    for sub in subsets:
        for x in sub:
            rel.setdefault(x, set()).update(sub)
    classes = {x: tuple(sorted(v, key=natural_key)) for x, v in sorted(rel.items(), key=lambda kv: natural_key(kv[0]))}
    names = {sub: subset_name(sub) for sub in subsets}
    observer = Tdes.build(
        f"OBS({t.name})",
        [names[s] for s in subsets],
        keep,
        [(names[a], ev, names[b]) for a, ev, b in transitions],
        names[subsets[0]],
        {names[s] for s in subsets if s & t.marked},
        {names[s]: s for s in subsets},
    )
    return ObsRelation(classes, observer)
