"""Shared randomized fixtures for the test suite."""

from __future__ import annotations

import string

import numpy as np

from mixedbo import Categorical, Integer, Real, SearchSpace


def random_space(rng: np.random.Generator, max_dims: int = 3, max_labels: int = 4) -> SearchSpace:
    dims = []
    for _ in range(rng.integers(1, max_dims + 1)):
        kind = rng.integers(3)
        if kind == 0:
            lo = float(rng.uniform(-3.0, 1.0))
            dims.append(Real(lo, lo + float(rng.uniform(0.5, 4.0))))
        elif kind == 1:
            lo = int(rng.integers(-4, 3))
            dims.append(Integer(lo, lo + int(rng.integers(1, 7))))
        else:
            n = int(rng.integers(2, max_labels + 1))
            dims.append(Categorical(list(string.ascii_lowercase[:n])))
    return SearchSpace(dims)


def random_config(space: SearchSpace, rng: np.random.Generator):
    return space.decode(space.sample(rng))
