"""Event alphabets of a plant and the networked events derived from them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

TICK = "tick"

ENABLING_SUFFIX = "_e"
OBSERVED_SUFFIX = "_o"


@dataclass(frozen=True)
class Event:
    name: str
    controllable: bool
    forcible: bool = False


class EventTable:
    """Registry of the active events of a plant.

    ``tick`` is implicit and never registered.  Every controllable active
    event ``s`` gets an enabling event ``s_e`` and every active event gets an
    observed event ``s_o``.
    """

    def __init__(self, events: Iterable[Event] = ()):
        self._events: dict[str, Event] = {}
        for ev in events:
            if ev.name in self._events:
                raise ValueError(f"duplicate event {ev.name!r}")
            self._events[ev.name] = ev

    def __iter__(self):
        return iter(self._events.values())

    def __len__(self):
        return len(self._events)

    def __contains__(self, name):
        return name in self._events

    def __getitem__(self, name) -> Event:
        return self._events[name]

    def __eq__(self, other):
        return isinstance(other, EventTable) and self._events == other._events

    def __repr__(self):
        return f"EventTable({list(self._events.values())!r})"

    # plant alphabet classes

    @property
    def active(self) -> tuple[str, ...]:
        return tuple(self._events)

    @property
    def controllable(self) -> frozenset[str]:
        return frozenset(n for n, e in self._events.items() if e.controllable)

    @property
    def uncontrollable(self) -> frozenset[str]:
        return frozenset(n for n, e in self._events.items() if not e.controllable)

    @property
    def forcible(self) -> frozenset[str]:
        return frozenset(n for n, e in self._events.items() if e.forcible)

    @property
    def plant_alphabet(self) -> frozenset[str]:
        return frozenset(self._events) | {TICK}

    # networked events

    @staticmethod
    def enabling(name: str) -> str:
        return name + ENABLING_SUFFIX

    @staticmethod
    def observed(name: str) -> str:
        return name + OBSERVED_SUFFIX

    @property
    def enabling_events(self) -> frozenset[str]:
        return frozenset(self.enabling(n) for n in self.controllable)

    @property
    def observed_events(self) -> frozenset[str]:
        return frozenset(self.observed(n) for n in self._events)

    @property
    def supervisor_alphabet(self) -> frozenset[str]:
        return self.enabling_events | self.observed_events | {TICK}

    @property
    def networked_alphabet(self) -> frozenset[str]:
        return self.supervisor_alphabet | self.plant_alphabet

    def base_of(self, event: str) -> str | None:
        """Active event behind an enabling or observed id, else ``None``."""
        for suffix, pool in ((ENABLING_SUFFIX, self.enabling_events),
                             (OBSERVED_SUFFIX, self.observed_events)):
            if event in pool:
                return event[: -len(suffix)]
        return None

    def kind(self, event: str) -> str:
        if event == TICK:
            return "tick"
        if event in self._events:
            return "active"
        if event in self.enabling_events:
            return "enabling"
        if event in self.observed_events:
            return "observed"
        raise KeyError(event)

    def diagnostics(self) -> list[str]:
        problems = []
        if TICK in self._events:
            problems.append("tick must not be declared as an active event")
        derived = self.enabling_events | self.observed_events
        for name in sorted(set(self._events) & derived):
            problems.append(f"event {name!r} clashes with a derived enabling/observed id")
        return problems
