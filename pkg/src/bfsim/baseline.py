"""Finite-network oracle simulators for the clipped Hawkes model.

Three simulators with provably identical laws, used to cross-check the
backward-forward engine on models where both apply:

* inverse transform: per-neuron race, each neuron solving the integral of
  its piecewise-constant no-new-spike intensity against a unit exponential;
* thinning: per-neuron rate-B dominating Poisson proposals accepted with
  probability intensity/B (B = 2M by default, a valid ceiling since the
  clipped interaction term is below M and weights sum below 1);
* full-network Kalikow thinning: rate-M candidate streams on every neuron
  merged in time order, each candidate drawing a random neighborhood and a
  Bernoulli(phi/M) mark; earlier candidates are always marked already, so
  the forward logic needs no backward phase.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import CeilingViolated
from .models import FiniteHawkesModel, phi_v
from .rng import single_stream
from .types import NeuronId

Trains = Dict[NeuronId, List[float]]


def _clipped_sum(model: FiniteHawkesModel, i_idx: int, t: float,
                 trains: Trains) -> float:
    """nu_i + sum_j w_ij * (count of j in [t-A, t) ^ M) on accepted trains."""
    total = model.nu[i_idx]
    lo = t - model.window
    for j, w in zip(model.neurons, model.weights[i_idx]):
        if w <= 0:
            continue
        ts = trains[j]
        c = bisect_left(ts, t) - bisect_left(ts, lo)
        if c:
            total += w * min(c, model.M)
    return total


def next_event_time(model: FiniteHawkesModel, i: NeuronId, t: float,
                    trains: Trains, target_integral: float) -> float:
    """Solve int_t^T phi_abs_i(s, t) ds = target_integral exactly.

    phi_abs freezes the history at t, so it is piecewise constant in s and
    only steps down when an old spike exits the length-A window."""
    i_idx = model.index(i)
    # spikes still in the window at s = t, with their exit times
    exits: List[Tuple[float, int]] = []  # (exit time, presynaptic index)
    counts = [0] * len(model.neurons)
    lo = t - model.window
    # spikes known at t include one occurring exactly at t (the event the
    # main loop just appended), hence the right-inclusive slice
    for j_idx, (j, w) in enumerate(zip(model.neurons, model.weights[i_idx])):
        if w <= 0:
            continue
        ts = trains[j]
        for k in range(bisect_left(ts, lo), bisect_right(ts, t)):
            exits.append((ts[k] + model.window, j_idx))
            counts[j_idx] += 1
    exits.sort()

    rate = model.nu[i_idx]
    for j_idx, w in enumerate(model.weights[i_idx]):
        if counts[j_idx]:
            rate += w * min(counts[j_idx], model.M)

    remaining = target_integral
    cur = t
    for exit_time, j_idx in exits:
        if exit_time > cur:
            seg = exit_time - cur
            if remaining <= rate * seg:
                return cur + remaining / rate
            remaining -= rate * seg
            cur = exit_time
        w = model.weights[i_idx][j_idx]
        c = counts[j_idx]
        rate += w * (min(c - 1, model.M) - min(c, model.M))
        counts[j_idx] = c - 1
    # beyond the last exit the rate is the spontaneous one, which is positive
    assert rate > 0, "intensity integrates to a finite value"
    return cur + remaining / rate


def simulate_ogata_inverse(model: FiniteHawkesModel, t0: float, t1: float,
                           seed: int) -> Trains:
    """Per-neuron inverse-transform race; exact for the piecewise-constant
    frozen-history intensity."""
    rng = single_stream(seed)
    trains: Trains = {n: [] for n in model.neurons}
    t = t0
    while True:
        best_T = math.inf
        best_i: Optional[NeuronId] = None
        for i in model.neurons:
            E = rng.exponential(1.0)
            T_i = next_event_time(model, i, t, trains, E)
            if T_i < best_T:
                best_T, best_i = T_i, i
        if best_T > t1:
            break
        trains[best_i].append(best_T)
        t = best_T
    return trains


def simulate_ogata_thinning(model: FiniteHawkesModel, t0: float, t1: float,
                            seed: int, ceiling: Optional[float] = None) -> Trains:
    """Thinned dominating Poisson proposals, law-identical to the inverse
    variant."""
    B = ceiling if ceiling is not None else 2.0 * model.M
    rng = single_stream(seed)
    trains: Trains = {n: [] for n in model.neurons}
    t = t0
    while True:
        best_T = math.inf
        best_i: Optional[NeuronId] = None
        for i in model.neurons:
            T_i = t + rng.exponential(1.0 / B)
            if T_i < best_T:
                best_T, best_i = T_i, i
        if best_T > t1:
            break
        rate = _clipped_sum(model, model.index(best_i), best_T, trains)
        if rate > B:
            raise CeilingViolated(f"intensity {rate} above ceiling {B}")
        if rng.random() < rate / B:
            trains[best_i].append(best_T)
        t = best_T
    return trains


def simulate_kalikow_full(model: FiniteHawkesModel, t0: float, t1: float,
                          seed: int) -> Trains:
    """Kalikow thinning applied jointly to the whole finite network.

    All candidates exist up front and are processed in time order, so every
    point inside a drawn neighborhood is already marked when needed."""
    rng = single_stream(seed)
    M = model.M
    horizon = t1 - t0
    candidates: List[Tuple[float, NeuronId]] = []
    for n in model.neurons:
        count = rng.poisson(M * horizon) if horizon > 0 else 0
        for t in rng.uniform(t0, t1, count):
            candidates.append((float(t), n))
    candidates.sort()

    trains: Trains = {n: [] for n in model.neurons}
    for t, i in candidates:
        template = model.sample_neighborhood(i, rng)
        shifted = template.shift(t)
        inside = [
            (n, s)
            for n, iv in shifted
            for s in trains[n][bisect_left(trains[n], iv.start):
                               bisect_left(trains[n], iv.end)]
        ]
        phi = phi_v(i, shifted, inside, model)
        if rng.random() < phi / M:
            trains[i].append(t)
    return trains
