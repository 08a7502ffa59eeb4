"""Perfect simulation of one neuron embedded in a potentially infinite
stochastic neuronal network, with finite-network oracles and statistical
verification tools."""

from .analysis import (
    HeatmapSummary,
    RateTestResult,
    TreeResult,
    dominating_tree_sim,
    ks_two_sample,
    rate_test,
    raster,
    request_heatmap,
)
from .baseline import (
    simulate_kalikow_full,
    simulate_ogata_inverse,
    simulate_ogata_thinning,
)
from .coverage import CoverageMap
from .engine_bf import Limits, MarkedPoint, SimulationRecord, simulate_bf
from .errors import (
    BfsimError,
    CeilingViolated,
    InsufficientData,
    InvalidModel,
    LimitExceeded,
    OrderingViolation,
)
from .models import (
    FiniteHawkesModel,
    KalikowModel,
    LatticeGaussianHawkesModel,
    ValidationReport,
    finite_from_couplings,
    hawkes_intensity,
    phi_v,
    reconstructed_intensity,
    sample_neighborhood,
    validate_model,
)
from .types import (
    EMPTY_NEIGHBORHOOD,
    NeighborhoodTemplate,
    NeuronId,
    TimeInterval,
)

__all__ = [
    "BfsimError",
    "CeilingViolated",
    "CoverageMap",
    "EMPTY_NEIGHBORHOOD",
    "FiniteHawkesModel",
    "HeatmapSummary",
    "InsufficientData",
    "InvalidModel",
    "KalikowModel",
    "LatticeGaussianHawkesModel",
    "LimitExceeded",
    "Limits",
    "MarkedPoint",
    "NeighborhoodTemplate",
    "NeuronId",
    "OrderingViolation",
    "RateTestResult",
    "SimulationRecord",
    "TimeInterval",
    "TreeResult",
    "ValidationReport",
    "dominating_tree_sim",
    "finite_from_couplings",
    "hawkes_intensity",
    "ks_two_sample",
    "phi_v",
    "rate_test",
    "raster",
    "reconstructed_intensity",
    "request_heatmap",
    "sample_neighborhood",
    "simulate_bf",
    "simulate_kalikow_full",
    "simulate_ogata_inverse",
    "simulate_ogata_thinning",
    "validate_model",
]

__version__ = "0.1.0"
