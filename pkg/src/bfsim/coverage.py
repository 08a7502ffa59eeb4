"""Record of already-visited (neuron, time interval) regions.

Each neuron owns a sorted list of disjoint half-open intervals; adjacent
intervals are merged on insert. `uncovered` answers which portion of a
new neighborhood has never been simulated, which is what guarantees that
every region of the network is simulated exactly once.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Dict, Iterable, List, Tuple

from .types import NeuronId, ShiftedEntry, TimeInterval


class CoverageMap:
    def __init__(self):
        # neuron -> parallel sorted lists of interval starts and ends
        self._starts: Dict[NeuronId, List[float]] = {}
        self._ends: Dict[NeuronId, List[float]] = {}

    def neurons(self) -> Iterable[NeuronId]:
        return self._starts.keys()

    def intervals(self, neuron: NeuronId) -> List[TimeInterval]:
        starts = self._starts.get(neuron, [])
        ends = self._ends.get(neuron, [])
        return [TimeInterval(s, e) for s, e in zip(starts, ends)]

    def covered_measure(self) -> float:
        return sum(
            e - s
            for neuron in self._starts
            for s, e in zip(self._starts[neuron], self._ends[neuron])
        )

    def uncovered(self, neuron: NeuronId, iv: TimeInterval) -> List[TimeInterval]:
        """Set difference iv \\ map as disjoint half-open intervals."""
        starts = self._starts.get(neuron)
        if not starts:
            return [iv]
        ends = self._ends[neuron]
        out: List[TimeInterval] = []
        cursor = iv.start
        # first stored interval whose end exceeds iv.start can overlap
        k = bisect_right(ends, iv.start)
        while k < len(starts) and starts[k] < iv.end:
            if cursor < starts[k]:
                out.append(TimeInterval(cursor, starts[k]))
            cursor = max(cursor, ends[k])
            k += 1
        if cursor < iv.end:
            out.append(TimeInterval(cursor, iv.end))
        return out

    def insert(self, neuron: NeuronId, iv: TimeInterval) -> None:
        """Add iv to the neuron's row, merging overlaps and adjacencies."""
        starts = self._starts.setdefault(neuron, [])
        ends = self._ends.setdefault(neuron, [])
        # all stored intervals touching [start, end] collapse into one
        lo = bisect_left(ends, iv.start)
        hi = bisect_right(starts, iv.end)
        new_start = iv.start if lo == hi else min(iv.start, starts[lo])
        new_end = iv.end if lo == hi else max(iv.end, ends[hi - 1])
        starts[lo:hi] = [new_start]
        ends[lo:hi] = [new_end]

    def insert_region(self, shifted: Iterable[ShiftedEntry]) -> None:
        for neuron, iv in shifted:
            self.insert(neuron, iv)

    def uncovered_region(
        self, shifted: Iterable[ShiftedEntry]
    ) -> List[Tuple[NeuronId, TimeInterval]]:
        out: List[Tuple[NeuronId, TimeInterval]] = []
        for neuron, iv in shifted:
            out.extend((neuron, sub) for sub in self.uncovered(neuron, iv))
        return out
