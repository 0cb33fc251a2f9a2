"""Control and observation channels with tick-counter dynamics.

Both channels are immutable values.  Operations return a fresh channel; the
insert operations also return whether the element was dropped because the
channel was full.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .tdes import natural_key

Item = tuple[str, int]


class EmptyChannelError(LookupError):
    """``head``/``tail`` of an empty control channel."""


def _canonical(counts: Counter | dict) -> tuple[tuple[Item, int], ...]:
    return tuple(sorted(((k, v) for k, v in counts.items() if v > 0),
                        key=lambda kv: (natural_key(kv[0][0]), kv[0][1])))


@dataclass(frozen=True)
class ControlChannel:
    """Pending enabling commands ``(event, remaining ticks)``.

    With ``fifo=True`` the items form a list; otherwise they form a multiset
    kept in canonical order and commands may be consumed in any order.
    """

    nc: int
    lmax: int
    fifo: bool = True
    items: tuple[Item, ...] = ()
    allowed: frozenset[str] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.nc < 0 or self.lmax < 0:
            raise ValueError("Nc and Lmax must be nonnegative")
        if not self.fifo:
            object.__setattr__(self, "items", tuple(sorted(
                self.items, key=lambda it: (natural_key(it[0]), it[1]))))

    def _with(self, items) -> "ControlChannel":
        return ControlChannel(self.nc, self.lmax, self.fifo, tuple(items), self.allowed)

    def __len__(self):
        return len(self.items)

    @property
    def full(self) -> bool:
        return len(self.items) >= self.lmax

    def app(self, event: str) -> tuple["ControlChannel", bool]:
        """Queue ``(event, Nc)``; a full channel is returned unchanged with drop=True."""
        if self.allowed is not None and event not in self.allowed:
            raise ValueError(f"{event!r} is not a controllable active event")
        if self.full:
            return self, True
        return self._with(self.items + ((event, self.nc),)), False

    def head(self) -> Item:
        if not self.items:
            raise EmptyChannelError("empty channel")
        return self.items[0]

    def tail(self) -> "ControlChannel":
        if not self.items:
            raise EmptyChannelError("empty channel")
        return self._with(self.items[1:])

    def dec(self) -> "ControlChannel":
        """Decrement every counter; commands already at 0 expire."""
        return self._with((e, n - 1) for e, n in self.items if n > 0)

    def ready(self, event: str) -> bool:
        """Whether ``event`` may be executed by the plant now."""
        if self.fifo:
            return bool(self.items) and self.items[0] == (event, 0)
        return (event, 0) in self.items

    def consume(self, event: str) -> "ControlChannel":
        """Remove the ready command for ``event`` (tail for FIFO)."""
        if self.fifo:
            if not self.ready(event):
                raise EmptyChannelError(f"{event!r} is not at the head of the channel")
            return self.tail()
        items = list(self.items)
        items.remove((event, 0))
        return self._with(items)

    def render(self) -> str:
        return "[" + ",".join(f"({e},{n})" for e, n in self.items) + "]"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class ObservationChannel:
    """Multiset of in-flight observations ``(event, remaining ticks) -> count``."""

    no: int
    mmax: int
    counts: tuple[tuple[Item, int], ...] = field(default=())
    allowed: frozenset[str] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.no < 0 or self.mmax < 0:
            raise ValueError("No and Mmax must be nonnegative")
        object.__setattr__(self, "counts", _canonical(dict(self.counts)))

    @classmethod
    def of(cls, no: int, mmax: int, items: Iterable[Item] = (), allowed=None) -> "ObservationChannel":
        return cls(no, mmax, tuple(Counter(items).items()), allowed)

    def _with(self, counts) -> "ObservationChannel":
        return ObservationChannel(self.no, self.mmax, _canonical(counts), self.allowed)

    def as_dict(self) -> dict[Item, int]:
        return dict(self.counts)

    def count(self, event: str, n: int) -> int:
        return self.as_dict().get((event, n), 0)

    def __len__(self):
        return sum(k for _, k in self.counts)

    @property
    def full(self) -> bool:
        return len(self) >= self.mmax

    def insert(self, event: str) -> tuple["ObservationChannel", bool]:
        """Add ``(event, No)``; a full channel is returned unchanged with drop=True."""
        if self.allowed is not None and event not in self.allowed:
            raise ValueError(f"{event!r} is not an active event")
        if self.full:
            return self, True
        d = self.as_dict()
        d[(event, self.no)] = d.get((event, self.no), 0) + 1
        return self._with(d), False

    def remove(self, event: str) -> "ObservationChannel":
        """Remove one ``(event, 0)``; total (no-op when absent)."""
        d = self.as_dict()
        d[(event, 0)] = max(d.get((event, 0), 0) - 1, 0)
        return self._with(d)

    def dec(self) -> "ObservationChannel":
        d = self.as_dict()
        return self._with({(e, n - 1): k for (e, n), k in d.items() if n > 0})

    def ready(self) -> frozenset[str]:
        return frozenset(e for (e, n), k in self.counts if n == 0 and k > 0)

    def render(self) -> str:
        return "{" + ",".join(f"({e},{n}):{k}" for (e, n), k in self.counts) + "}"

    def __str__(self):
        return self.render()
