import numpy as np
import pytest

from bfsim import FiniteHawkesModel, LatticeGaussianHawkesModel


@pytest.fixture
def lattice_model():
    return LatticeGaussianHawkesModel(sigma=1.0, lam_empty=0.25, M=2.0)


@pytest.fixture
def single_neuron_model():
    # w = 0.5, lambda_empty = 0.5, coupled nu = 0.9 and A = 0.9
    return FiniteHawkesModel(
        neurons=((0, 0),),
        weights=((0.5,),),
        nu=(0.9,),
        window=0.9,
        M=2.0,
    )


@pytest.fixture
def three_neuron_model():
    neurons = ((0, 0), (1, 0), (2, 0))
    weights = (
        (0.2, 0.3, 0.0),
        (0.0, 0.2, 0.3),
        (0.3, 0.0, 0.2),
    )
    return FiniteHawkesModel(
        neurons=neurons,
        weights=weights,
        nu=(0.5, 0.5, 0.5),
        window=0.5,
        M=2.0,
    )


def isis(times):
    return [b - a for a, b in zip(times, times[1:])]
