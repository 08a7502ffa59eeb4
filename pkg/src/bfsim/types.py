"""Core domain types: neuron ids, time intervals, neighborhood templates.

Neurons live on the integer lattice Z^2; finite models embed their index
set as (k, 0). Time is a float64 in seconds and every interval is
half-open [start, end) so adjacent windows abut without overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

NeuronId = Tuple[int, int]


@dataclass(frozen=True, order=True)
class TimeInterval:
    """Half-open interval [start, end)."""

    start: float
    end: float

    def __post_init__(self):
        if not self.end > self.start:
            raise ValueError(f"degenerate interval [{self.start}, {self.end})")

    @property
    def length(self) -> float:
        return self.end - self.start

    def contains(self, t: float) -> bool:
        return self.start <= t < self.end

    def shift(self, dt: float) -> "TimeInterval":
        return TimeInterval(self.start + dt, self.end + dt)


# A neighborhood shifted to an absolute anchor time: (neuron, absolute window).
ShiftedEntry = Tuple[NeuronId, TimeInterval]


@dataclass(frozen=True)
class NeighborhoodTemplate:
    """A finite set of (neuron, past window) pairs; the empty tuple is v = emptyset.

    Windows are expressed relative to the anchor time and must lie in the
    strict past (end <= 0).
    """

    entries: Tuple[Tuple[NeuronId, TimeInterval], ...] = ()

    def __post_init__(self):
        for neuron, iv in self.entries:
            if iv.end > 0:
                raise ValueError(f"template window {iv} reaches into the future")

    @property
    def is_empty(self) -> bool:
        return not self.entries

    @property
    def total_length(self) -> float:
        """l(v): summed window length over all entries, 0 for the empty set."""
        return sum(iv.length for _, iv in self.entries)

    def shift(self, anchor: float) -> Tuple[ShiftedEntry, ...]:
        """Anchor the template at an absolute time."""
        return tuple((neuron, iv.shift(anchor)) for neuron, iv in self.entries)


EMPTY_NEIGHBORHOOD = NeighborhoodTemplate(())
