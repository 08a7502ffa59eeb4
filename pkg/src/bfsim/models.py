"""Hawkes models and their Kalikow decompositions.

A model exposes a dominating bound M, a per-neuron neighborhood
distribution lambda_i over {emptyset} union V, and a bounded local
intensity phi_i^v that reads only the accepted points inside the shifted
neighborhood. Two instantiations are provided:

* FiniteHawkesModel: an explicit weight matrix over a finite neuron set,
  with clipped window counts (intensity nu_i + sum_j w_ij * (Nb_j ^ M)).
* LatticeGaussianHawkesModel: an infinite network on Z^2 whose
  neighborhood picks a single neuron at a rounded bivariate Gaussian
  offset; nu and A are coupled to (M, lambda_empty) so that
  phi^empty < M and the sparsity product stays subcritical.
"""

from __future__ import annotations

import hashlib
import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .types import (
    EMPTY_NEIGHBORHOOD,
    NeighborhoodTemplate,
    NeuronId,
    ShiftedEntry,
    TimeInterval,
)

# A point is (neuron, time); histories are iterables of these.
Point = Tuple[NeuronId, float]


def _round_half_away(x: float) -> int:
    """Round to nearest integer, halves away from zero."""
    if x >= 0.0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


class KalikowModel(ABC):
    """Interface: bound M, neighborhood sampler, local intensity rule."""

    @property
    @abstractmethod
    def bound(self) -> float:
        """Dominating rate M for the candidate Poisson streams."""

    @abstractmethod
    def lambda_empty(self, i: NeuronId) -> float:
        """Probability that neuron i draws the empty neighborhood."""

    @abstractmethod
    def phi_empty(self, i: NeuronId) -> float:
        """Constant local intensity for the empty neighborhood."""

    @abstractmethod
    def sample_neighborhood(
        self, i: NeuronId, rng: np.random.Generator
    ) -> NeighborhoodTemplate:
        """Draw a template from lambda_i (timeline in the strict past)."""

    @abstractmethod
    def local_intensity(self, i: NeuronId, accepted_count: int) -> float:
        """phi_i^v for a non-empty v given the accepted count inside it."""

    @abstractmethod
    def sparsity(self) -> float:
        """zeta = sup_i sum_{v != empty} lambda_i(v) * l(v) * M."""

    @abstractmethod
    def enumerate_neighborhoods(
        self, i: NeuronId
    ) -> Optional[List[Tuple[NeighborhoodTemplate, float]]]:
        """Full (template, probability) support for neuron i, or None if the
        family is infinite and can only be sampled."""

    @abstractmethod
    def params(self) -> dict:
        """JSON-serializable parameter dictionary (used for fingerprints)."""

    def fingerprint(self) -> str:
        blob = json.dumps(self.params(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class FiniteHawkesModel(KalikowModel):
    """Finite neuron set with explicit non-negative weights w[i][j].

    Decomposition: lambda_i(empty) = 1 - sum_j w_ij, lambda_i({(j,[-A,0))}) = w_ij,
    phi_i^empty = nu_i / lambda_i(empty), phi_i^v = clipped window count.
    """

    neurons: Tuple[NeuronId, ...]
    weights: Tuple[Tuple[float, ...], ...]  # weights[i][j], row = postsynaptic
    nu: Tuple[float, ...]
    window: float  # memory window A, seconds
    M: float

    def __post_init__(self):
        n = len(self.neurons)
        if len(self.weights) != n or any(len(row) != n for row in self.weights):
            raise ValueError("weight matrix shape does not match neuron list")
        if len(self.nu) != n:
            raise ValueError("nu length does not match neuron list")
        if any(w < 0 for row in self.weights for w in row):
            raise ValueError("weights must be non-negative")

    @property
    def bound(self) -> float:
        return self.M

    def index(self, i: NeuronId) -> int:
        return self.neurons.index(i)

    def lambda_empty(self, i: NeuronId) -> float:
        return 1.0 - sum(self.weights[self.index(i)])

    def phi_empty(self, i: NeuronId) -> float:
        k = self.index(i)
        lam0 = 1.0 - sum(self.weights[k])
        return self.nu[k] / lam0

    def _template(self, j: NeuronId) -> NeighborhoodTemplate:
        return NeighborhoodTemplate(((j, TimeInterval(-self.window, 0.0)),))

    def sample_neighborhood(self, i, rng) -> NeighborhoodTemplate:
        row = self.weights[self.index(i)]
        u = rng.random()
        acc = 1.0 - sum(row)  # lambda_i(empty) first
        if u < acc:
            return EMPTY_NEIGHBORHOOD
        for j, w in zip(self.neurons, row):
            acc += w
            if u < acc:
                return self._template(j)
        # u landed in float round-off at the top of the CDF
        last = max(range(len(row)), key=lambda k: row[k])
        return self._template(self.neurons[last])

    def local_intensity(self, i, accepted_count: int) -> float:
        return float(min(accepted_count, self.M))

    def sparsity(self) -> float:
        return max(sum(row) for row in self.weights) * self.window * self.M

    def enumerate_neighborhoods(self, i):
        row = self.weights[self.index(i)]
        out = [(EMPTY_NEIGHBORHOOD, 1.0 - sum(row))]
        for j, w in zip(self.neurons, row):
            if w > 0:
                out.append((self._template(j), w))
        return out

    def params(self) -> dict:
        return {
            "kind": "finite",
            "neurons": [list(n) for n in self.neurons],
            "weights": [list(r) for r in self.weights],
            "nu": list(self.nu),
            "A": self.window,
            "M": self.M,
        }


def finite_from_couplings(
    neurons: Sequence[NeuronId],
    weights: Sequence[Sequence[float]],
    M: float,
) -> FiniteHawkesModel:
    """Finite model with nu and A derived from (M, lambda_empty) the same way
    the lattice model couples them: nu_i = 0.9*M*lambda_i(empty) and
    A = 0.9 / (M * max_i(1 - lambda_i(empty)))."""
    rows = [tuple(map(float, row)) for row in weights]
    wmax = max(sum(r) for r in rows)
    if not wmax < 1.0:
        raise ValueError("weight rows must sum below 1")
    if wmax == 0.0:
        raise ValueError("couplings need at least one positive weight")
    A = 0.9 / (M * wmax)
    nu = tuple(0.9 * M * (1.0 - sum(r)) for r in rows)
    return FiniteHawkesModel(tuple(neurons), tuple(rows), nu, A, float(M))


@dataclass(frozen=True)
class LatticeGaussianHawkesModel(KalikowModel):
    """Infinite network on Z^2; a non-empty neighborhood is a single neuron at
    offset round(W), W ~ N(0, sigma^2 I), with window [-A, 0).

    nu = 0.9*M*lambda_empty and A = 0.9 / (M*(1-lambda_empty)), which keeps
    phi^empty = 0.9*M < M and the sparsity product (1-lambda_empty)*A*M = 0.9.
    """

    sigma: float
    lam_empty: float
    M: float

    def __post_init__(self):
        if not 0.0 < self.lam_empty <= 1.0:
            raise ValueError("lambda_empty must be in (0, 1]")
        if self.M <= 0 or self.sigma < 0:
            raise ValueError("M must be positive and sigma non-negative")

    @property
    def nu(self) -> float:
        return 0.9 * self.M * self.lam_empty

    @property
    def window(self) -> float:
        # A is never consulted when lambda_empty == 1 (no non-empty draw)
        if self.lam_empty == 1.0:
            return math.inf
        return 0.9 / (self.M * (1.0 - self.lam_empty))

    @property
    def bound(self) -> float:
        return self.M

    def lambda_empty(self, i) -> float:
        return self.lam_empty

    def phi_empty(self, i) -> float:
        return self.nu / self.lam_empty  # = 0.9*M

    def sample_neighborhood(self, i, rng) -> NeighborhoodTemplate:
        if rng.random() < self.lam_empty:
            return EMPTY_NEIGHBORHOOD
        wx, wy = rng.normal(0.0, self.sigma, size=2)
        j = (i[0] + _round_half_away(wx), i[1] + _round_half_away(wy))
        return NeighborhoodTemplate(((j, TimeInterval(-self.window, 0.0)),))

    def local_intensity(self, i, accepted_count: int) -> float:
        return float(min(accepted_count, self.M))

    def sparsity(self) -> float:
        if self.lam_empty == 1.0:
            return 0.0
        return (1.0 - self.lam_empty) * self.window * self.M

    def enumerate_neighborhoods(self, i):
        return None  # infinite family, sampled only

    def offset_probability(self, k: int) -> float:
        """Probability that one rounded Gaussian coordinate equals k."""
        if self.sigma == 0.0:
            return 1.0 if k == 0 else 0.0
        lo = (k - 0.5) / self.sigma
        hi = (k + 0.5) / self.sigma
        phi = lambda x: 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))
        return phi(hi) - phi(lo)

    def params(self) -> dict:
        return {
            "kind": "lattice-gaussian",
            "sigma": self.sigma,
            "lambda_empty": self.lam_empty,
            "M": self.M,
        }


# ---------------------------------------------------------------------------
# Intensity operations
# ---------------------------------------------------------------------------

def _window_counts(
    model: FiniteHawkesModel, t: float, accepted_points: Iterable[Point]
) -> Dict[NeuronId, int]:
    counts: Dict[NeuronId, int] = {}
    lo = t - model.window
    for neuron, s in accepted_points:
        if lo <= s < t:
            counts[neuron] = counts.get(neuron, 0) + 1
    return counts


def hawkes_intensity(
    i: NeuronId,
    t: float,
    accepted_points: Iterable[Point],
    model: FiniteHawkesModel,
) -> float:
    """nu_i + sum_j w_ij * min(count of j-spikes in [t-A, t), M)."""
    k = model.index(i)
    counts = _window_counts(model, t, accepted_points)
    total = model.nu[k]
    for j, w in zip(model.neurons, model.weights[k]):
        c = counts.get(j, 0)
        if w > 0 and c > 0:
            total += w * min(c, model.M)
    return total


def reconstructed_intensity(
    i: NeuronId,
    t: float,
    accepted_points: Iterable[Point],
    model: FiniteHawkesModel,
) -> float:
    """Mixture form lambda_i(empty)*phi^empty + sum_v lambda_i(v)*phi^v(t).

    Must coincide with hawkes_intensity on every history (the decomposition
    identity)."""
    k = model.index(i)
    lam0 = 1.0 - sum(model.weights[k])
    counts = _window_counts(model, t, accepted_points)
    total = lam0 * (model.nu[k] / lam0)
    for j, w in zip(model.neurons, model.weights[k]):
        if w > 0:
            total += w * model.local_intensity(i, counts.get(j, 0))
    return total


def phi_v(
    i: NeuronId,
    shifted: Tuple[ShiftedEntry, ...],
    accepted_points: Iterable[Point],
    model: KalikowModel,
) -> float:
    """Local intensity of a neighborhood already shifted to its anchor.

    `shifted` empty means v = emptyset. Every supplied point must lie inside
    the shifted neighborhood (only those points may influence phi)."""
    if not shifted:
        return model.phi_empty(i)
    count = 0
    for neuron, s in accepted_points:
        if not any(neuron == n and iv.contains(s) for n, iv in shifted):
            raise ValueError(f"point {(neuron, s)} lies outside the neighborhood")
        count += 1
    return model.local_intensity(i, count)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    zeta: float
    zeta_ok: bool
    mass_ok: bool
    phi_empty_ok: bool
    messages: List[str] = field(default_factory=list)


def validate_model(model: KalikowModel, mass_tol: float = 1e-12) -> ValidationReport:
    """Check the decomposition side conditions and the sparsity product.

    Failure is reported, not raised; engines refuse to run on a failed
    report unless explicitly overridden."""
    messages: List[str] = []
    mass_ok = True
    phi_empty_ok = True

    if isinstance(model, FiniteHawkesModel):
        probe_neurons: Sequence[NeuronId] = model.neurons
    else:
        probe_neurons = [(0, 0)]

    for i in probe_neurons:
        lam0 = model.lambda_empty(i)
        if not 0.0 < lam0 <= 1.0:
            mass_ok = False
            messages.append(f"lambda_empty({i}) = {lam0} outside (0, 1]")
            continue
        support = model.enumerate_neighborhoods(i)
        if support is not None:
            mass = sum(p for _, p in support)
            if abs(mass - 1.0) > mass_tol:
                mass_ok = False
                messages.append(f"lambda mass for {i} is {mass}, not 1")
        if model.phi_empty(i) > model.bound:
            phi_empty_ok = False
            messages.append(
                f"phi_empty({i}) = {model.phi_empty(i)} exceeds bound {model.bound}"
            )

    zeta = model.sparsity()
    zeta_ok = zeta < 1.0
    if not zeta_ok:
        messages.append(f"sparsity zeta = {zeta} >= 1: backward recursion may not end")

    ok = mass_ok and phi_empty_ok and zeta_ok
    return ValidationReport(ok, zeta, zeta_ok, mass_ok, phi_empty_ok, messages)


def sample_neighborhood(
    i: NeuronId, model: KalikowModel, rng: np.random.Generator
) -> NeighborhoodTemplate:
    """Draw from lambda_i using the supplied deterministic stream."""
    return model.sample_neighborhood(i, rng)
