"""Backward-forward perfect simulation of one neuron in a (possibly
infinite) network.

Candidates for the target neuron arrive as a rate-M Poisson stream on the
horizon. For each candidate, the backward phase recursively draws the
random neighborhoods of every point whose neighborhood is still
unassigned, simulating fresh rate-M Poisson points only on the portions
of those neighborhoods never visited before. The forward phase then walks
all still-unthinned points in increasing time and accepts each with
probability phi/M, where phi reads only accepted points inside the
point's own neighborhood — an order in which every needed mark is always
already known.

The horizon region (target, [t0, t1)) is covered from the start: the
candidate stream itself realizes the rate-M Poisson there, so backward
requests that reach into it reuse candidate points instead of
re-simulating.
"""

from __future__ import annotations

import time as _time
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .coverage import CoverageMap
from .errors import InvalidModel, LimitExceeded, OrderingViolation
from .models import KalikowModel, validate_model
from .rng import substreams
from .types import NeuronId, ShiftedEntry, TimeInterval


@dataclass(frozen=True)
class Limits:
    max_points: int = 1_000_000
    max_generations: int = 10_000


class MarkedPoint:
    """A simulated point with its neighborhood and thinning marks.

    Both marks transition exactly once, from unassigned to a value."""

    __slots__ = ("time", "neuron", "origin", "generation", "seq",
                 "_v_entries", "_x_mark")

    def __init__(self, time: float, neuron: NeuronId, origin: str,
                 generation: int, seq: int):
        self.time = time
        self.neuron = neuron
        self.origin = origin  # "candidate" | "backward"
        self.generation = generation
        self.seq = seq  # creation sequence, used for tie-breaking
        self._v_entries: Optional[Tuple[ShiftedEntry, ...]] = None
        self._x_mark: Optional[int] = None

    @property
    def v_entries(self) -> Optional[Tuple[ShiftedEntry, ...]]:
        return self._v_entries

    @property
    def x_mark(self) -> Optional[int]:
        return self._x_mark

    @property
    def v_kind(self) -> str:
        if self._v_entries is None:
            return "na"
        return "empty" if not self._v_entries else "window"

    def assign_v(self, entries: Tuple[ShiftedEntry, ...]) -> None:
        if self._v_entries is not None:
            raise ValueError("neighborhood mark already assigned")
        self._v_entries = entries

    def assign_x(self, accepted: bool) -> None:
        if self._x_mark is not None:
            raise ValueError("thinning mark already assigned")
        self._x_mark = 1 if accepted else 0

    def sort_key(self):
        return (self.time, self.neuron, self.seq)

    def __repr__(self):
        return (f"MarkedPoint(t={self.time:.6g}, n={self.neuron}, "
                f"{self.origin}, g={self.generation}, v={self.v_kind}, "
                f"x={self._x_mark})")


class _PointIndex:
    """Per-neuron time-sorted index over all points ever created."""

    def __init__(self):
        self._by_neuron: Dict[NeuronId, List[Tuple[float, int]]] = {}
        self._points: List[MarkedPoint] = []

    def add(self, p: MarkedPoint) -> None:
        self._points.append(p)
        insort(self._by_neuron.setdefault(p.neuron, []), (p.time, p.seq))

    def in_window(self, neuron: NeuronId, iv: TimeInterval) -> List[MarkedPoint]:
        row = self._by_neuron.get(neuron)
        if not row:
            return []
        k = bisect_left(row, (iv.start, -1))
        out = []
        while k < len(row) and row[k][0] < iv.end:
            out.append(self._points_by_seq[row[k][1]])
            k += 1
        return out

    # seq equals creation order, so the master list doubles as the lookup
    @property
    def _points_by_seq(self) -> List[MarkedPoint]:
        return self._points


@dataclass
class SimulationRecord:
    target: NeuronId
    t0: float
    t1: float
    seed: int
    model_fingerprint: str
    points: List[MarkedPoint]
    coverage: CoverageMap
    request_counts: Dict[NeuronId, int]
    simulated_time: Dict[NeuronId, float]
    simulated_intervals: List[Tuple[NeuronId, TimeInterval]]
    accepted_output: List[float]
    wall_ms: float = 0.0

    @property
    def total_points(self) -> int:
        return len(self.points)

    @property
    def accepted_count(self) -> int:
        return len(self.accepted_output)


class _BFState:
    def __init__(self, model: KalikowModel, target: NeuronId, t0: float,
                 t1: float, seed: int, limits: Limits):
        self.model = model
        self.target = target
        self.t0 = t0
        self.t1 = t1
        self.limits = limits
        self.rngs = substreams(seed)
        self.coverage = CoverageMap()
        if t1 > t0:
            self.coverage.insert(target, TimeInterval(t0, t1))
        self.index = _PointIndex()
        self.points: List[MarkedPoint] = []
        self.unthinned: List[MarkedPoint] = []
        self.request_counts: Dict[NeuronId, int] = {}
        self.simulated_time: Dict[NeuronId, float] = {}
        self.simulated_intervals: List[Tuple[NeuronId, TimeInterval]] = []

    def new_point(self, time: float, neuron: NeuronId, origin: str,
                  generation: int) -> MarkedPoint:
        if len(self.points) >= self.limits.max_points:
            raise LimitExceeded(
                f"more than {self.limits.max_points} points simulated")
        p = MarkedPoint(time, neuron, origin, generation, seq=len(self.points))
        self.points.append(p)
        self.index.add(p)
        self.unthinned.append(p)
        return p


def backward_expand(state: _BFState, root: MarkedPoint) -> None:
    """Assign neighborhoods to every pending point, simulating fresh
    Poisson(M) points on the never-visited portions, until no point is
    left without a neighborhood mark."""
    model = state.model
    M = model.bound
    rng_v = state.rngs["neighborhoods"]
    rng_p = state.rngs["poisson"]
    pending = [root]
    while pending:
        next_pending: List[MarkedPoint] = []
        for p in pending:
            if p.generation >= state.limits.max_generations:
                raise LimitExceeded(
                    f"backward expansion beyond generation "
                    f"{state.limits.max_generations}")
            template = model.sample_neighborhood(p.neuron, rng_v)
            shifted = template.shift(p.time)
            p.assign_v(shifted)
            for neuron, iv in shifted:
                assert iv.end <= p.time, "neighborhood reaches the future"
                state.request_counts[neuron] = (
                    state.request_counts.get(neuron, 0) + 1)
                for sub in state.coverage.uncovered(neuron, iv):
                    count = rng_p.poisson(M * sub.length)
                    if count:
                        times = np.sort(rng_p.uniform(sub.start, sub.end, count))
                        for t in times:
                            next_pending.append(state.new_point(
                                float(t), neuron, "backward",
                                p.generation + 1))
                    state.simulated_time[neuron] = (
                        state.simulated_time.get(neuron, 0.0) + sub.length)
                    state.simulated_intervals.append((neuron, sub))
                state.coverage.insert(neuron, iv)
        pending = next_pending


def forward_thin(state: _BFState) -> None:
    """Assign thinning marks to all pending points in increasing time.

    Ties are broken by neuron (lexicographic) then creation sequence."""
    model = state.model
    M = model.bound
    rng_b = state.rngs["bernoulli"]
    batch = sorted(state.unthinned, key=MarkedPoint.sort_key)
    state.unthinned = []
    for p in batch:
        entries = p.v_entries
        if entries is None:
            raise OrderingViolation(
                f"point {p!r} reached the forward phase without a neighborhood")
        if not entries:
            phi = model.phi_empty(p.neuron)
        else:
            accepted = 0
            for neuron, iv in entries:
                for q in state.index.in_window(neuron, iv):
                    if q.x_mark is None:
                        raise OrderingViolation(
                            f"unassigned mark on {q!r} inside the "
                            f"neighborhood of {p!r}")
                    accepted += q.x_mark
            phi = model.local_intensity(p.neuron, accepted)
        p.assign_x(rng_b.random() < phi / M)


def simulate_bf(
    model: KalikowModel,
    target: NeuronId,
    t0: float,
    t1: float,
    seed: int,
    limits: Optional[Limits] = None,
    override_sparsity: bool = False,
) -> SimulationRecord:
    """Simulate the target neuron's accepted spike train on [t0, t1]."""
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    report = validate_model(model)
    if not report.ok and not override_sparsity:
        raise InvalidModel("; ".join(report.messages) or "validation failed")
    started = _time.perf_counter()

    limits = limits or Limits()
    state = _BFState(model, target, t0, t1, seed, limits)
    rng_c = state.rngs["candidates"]
    M = model.bound

    t = t0 + rng_c.exponential(1.0 / M)
    while t < t1:
        cand = state.new_point(t, target, "candidate", 0)
        backward_expand(state, cand)
        forward_thin(state)
        t += rng_c.exponential(1.0 / M)

    accepted = sorted(
        p.time for p in state.points
        if p.neuron == target and p.x_mark == 1 and t0 <= p.time < t1)
    wall_ms = (_time.perf_counter() - started) * 1e3
    return SimulationRecord(
        target=target, t0=t0, t1=t1, seed=seed,
        model_fingerprint=model.fingerprint(),
        points=sorted(state.points, key=MarkedPoint.sort_key),
        coverage=state.coverage,
        request_counts=state.request_counts,
        simulated_time=state.simulated_time,
        simulated_intervals=state.simulated_intervals,
        accepted_output=accepted,
        wall_ms=wall_ms,
    )
