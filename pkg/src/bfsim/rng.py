"""Named random substreams derived from one root seed.

Each stochastic mechanism of a run draws from its own stream so that a
change in how one mechanism consumes randomness cannot perturb the
statistics of another. Streams are the children of
numpy.random.SeedSequence(seed).spawn(), in the fixed order below.
"""

from __future__ import annotations

from typing import Dict

import numpy as np

STREAM_NAMES = ("candidates", "neighborhoods", "poisson", "bernoulli")


def substreams(seed: int) -> Dict[str, np.random.Generator]:
    root = np.random.SeedSequence(seed)
    children = root.spawn(len(STREAM_NAMES))
    return {
        name: np.random.Generator(np.random.PCG64(child))
        for name, child in zip(STREAM_NAMES, children)
    }


def single_stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
