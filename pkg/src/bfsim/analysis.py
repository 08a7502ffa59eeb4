"""Statistical verification and run summaries.

Everything here is a pure function over an immutable simulation record or
a plain sample; summaries tally the event log exactly, without sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientData
from .models import KalikowModel
from .rng import single_stream
from .types import NeuronId, TimeInterval


# ---------------------------------------------------------------------------
# Run summaries
# ---------------------------------------------------------------------------

@dataclass
class HeatmapSummary:
    """Per-neuron request counts and Poisson-simulation time.

    The target row includes the horizon length: the candidate stream itself
    realizes the rate-M Poisson there, so the time spent at the target is
    at least t1 - t0."""

    rows: Dict[NeuronId, Tuple[int, float]]
    target: NeuronId
    accepted_count: int
    total_points: int


def request_heatmap(record) -> HeatmapSummary:
    rows: Dict[NeuronId, Tuple[int, float]] = {}
    neurons = set(record.request_counts) | set(record.simulated_time)
    neurons.add(record.target)
    horizon = record.t1 - record.t0
    for n in neurons:
        req = record.request_counts.get(n, 0)
        sim = record.simulated_time.get(n, 0.0)
        if n == record.target:
            sim += horizon
        rows[n] = (req, sim)
    return HeatmapSummary(
        rows=rows,
        target=record.target,
        accepted_count=record.accepted_count,
        total_points=record.total_points,
    )


@dataclass
class RasterData:
    # (neuron, time, accepted 0/1, origin, generation)
    events: List[Tuple[NeuronId, float, int, str, int]]
    # covered (blue-line) segments clipped to the window
    segments: List[Tuple[NeuronId, float, float]]


def raster(record, neurons: Sequence[NeuronId], window: TimeInterval) -> RasterData:
    wanted = set(neurons)
    events = [
        (p.neuron, p.time, p.x_mark if p.x_mark is not None else -1,
         p.origin, p.generation)
        for p in record.points
        if p.neuron in wanted and window.contains(p.time)
    ]
    segments: List[Tuple[NeuronId, float, float]] = []
    for n in wanted:
        for iv in record.coverage.intervals(n):
            lo = max(iv.start, window.start)
            hi = min(iv.end, window.end)
            if lo < hi:
                segments.append((n, lo, hi))
    events.sort(key=lambda e: (e[1], e[0]))
    segments.sort()
    return RasterData(events=events, segments=segments)


def audit_disjoint(record) -> bool:
    """Exact coverage-soundness check: no instant on any neuron was ever
    simulated twice.

    The Poisson-simulation intervals of a run must be pairwise disjoint per
    neuron and disjoint from the horizon region on the target (which the
    candidate stream realizes). Raises AssertionError on violation."""
    by_neuron: Dict[NeuronId, List[Tuple[float, float]]] = {}
    for n, iv in record.simulated_intervals:
        by_neuron.setdefault(n, []).append((iv.start, iv.end))
    if record.t1 > record.t0:
        by_neuron.setdefault(record.target, []).append((record.t0, record.t1))
    for n, ivs in by_neuron.items():
        ivs.sort()
        for (s0, e0), (s1, e1) in zip(ivs, ivs[1:]):
            assert e0 <= s1, (
                f"neuron {n}: simulated intervals [{s0},{e0}) and "
                f"[{s1},{e1}) overlap")
    return True


# ---------------------------------------------------------------------------
# Dominating-tree branching diagnostic
# ---------------------------------------------------------------------------

@dataclass
class TreeResult:
    """Generation sizes of the dominating branching tree.

    The tree ignores coverage pruning: every node draws a neighborhood and
    a Poisson(l(v)*M) number of children, independently of everything else,
    so its mean offspring equals the sparsity product."""

    generation_sizes: List[int]
    truncated: bool
    total_parents: int  # nodes whose offspring were drawn
    total_children: int

    @property
    def extinct(self) -> bool:
        return not self.truncated


def dominating_tree_sim(model: KalikowModel, root: NeuronId, seed: int,
                        max_gen: int = 1000) -> TreeResult:
    rng = single_stream(seed)
    M = model.bound
    sizes = [1]
    current: List[NeuronId] = [root]
    parents = 0
    children_total = 0
    gen = 0
    while current and gen < max_gen:
        nxt: List[NeuronId] = []
        for mark in current:
            parents += 1
            v = model.sample_neighborhood(mark, rng)
            if v.is_empty:
                continue
            count = int(rng.poisson(v.total_length * M))
            if not count:
                continue
            children_total += count
            lengths = np.array([iv.length for _, iv in v.entries])
            if len(v.entries) == 1:
                nxt.extend([v.entries[0][0]] * count)
            else:
                # a child falls in the entry whose window received it
                picks = rng.choice(len(v.entries), size=count,
                                   p=lengths / lengths.sum())
                nxt.extend(v.entries[k][0] for k in picks)
        current = nxt
        gen += 1
        if current:
            sizes.append(len(current))
    return TreeResult(
        generation_sizes=sizes,
        truncated=bool(current),
        total_parents=parents,
        total_children=children_total,
    )


# ---------------------------------------------------------------------------
# Statistical tests
# ---------------------------------------------------------------------------

@dataclass
class RateTestResult:
    z: float
    passed: bool
    count: int
    expected: float


def rate_test(times: Sequence[float], expected_rate: float,
              horizon_length: float, alpha: float = 0.05) -> RateTestResult:
    """z-test of a point count against a Poisson mean rate*length."""
    if expected_rate <= 0:
        raise ValueError("expected_rate must be positive")
    mean = expected_rate * horizon_length
    z = (len(times) - mean) / math.sqrt(mean)
    crit = NormalDist().inv_cdf(1.0 - alpha / 2.0)
    return RateTestResult(z=z, passed=abs(z) < crit,
                          count=len(times), expected=mean)


def _kolmogorov_sf(x: float, terms: int = 20) -> float:
    """Asymptotic Kolmogorov survival function, truncated series."""
    if x <= 0:
        return 1.0
    total = 0.0
    for k in range(1, terms + 1):
        total += (-1) ** (k - 1) * math.exp(-2.0 * (k * x) ** 2)
    return min(1.0, max(0.0, 2.0 * total))


def ks_two_sample(xs: Sequence[float], ys: Sequence[float],
                  min_n: int = 20) -> Tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value."""
    n1, n2 = len(xs), len(ys)
    if n1 < min_n or n2 < min_n:
        raise InsufficientData(
            f"need at least {min_n} samples per side, got {n1} and {n2}")
    x = np.sort(np.asarray(xs, dtype=float))
    y = np.sort(np.asarray(ys, dtype=float))
    grid = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, grid, side="right") / n1
    cdf_y = np.searchsorted(y, grid, side="right") / n2
    d = float(np.max(np.abs(cdf_x - cdf_y)))
    en = math.sqrt(n1 * n2 / (n1 + n2))
    return d, _kolmogorov_sf(en * d)


def mann_whitney_one_sided(xs: Sequence[float], ys: Sequence[float]
                           ) -> Tuple[float, float]:
    """One-sided Mann-Whitney U (H1: xs stochastically greater than ys).

    Normal approximation with tie correction; returns (U, p)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    n1, n2 = len(x), len(y)
    combined = np.concatenate([x, y])
    order = np.argsort(combined, kind="mergesort")
    ranks = np.empty(len(combined))
    sorted_vals = combined[order]
    # midranks for ties
    i = 0
    while i < len(sorted_vals):
        j = i
        while j + 1 < len(sorted_vals) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    r1 = ranks[:n1].sum()
    u = r1 - n1 * (n1 + 1) / 2.0
    mu = n1 * n2 / 2.0
    # tie correction to the variance
    _, tie_counts = np.unique(sorted_vals, return_counts=True)
    n = n1 + n2
    tie_term = float(np.sum(tie_counts ** 3 - tie_counts))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var == 0:
        return u, 1.0
    z = (u - mu) / math.sqrt(var)
    p = 1.0 - NormalDist().cdf(z)
    return u, p
