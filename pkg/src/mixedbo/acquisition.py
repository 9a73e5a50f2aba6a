"""Expected improvement and its derivative-free maximization.

Acquisition surfaces built on transformed kernels are piecewise constant
along integer and one-hot coordinates, so gradient ascent is useless there.
The maximizer combines a dense uniform probe of the box with coordinate-wise
pattern search from the best probes, which only needs function values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .space import SearchSpace

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def expected_improvement(mean, std, incumbent: float) -> np.ndarray:
    """E[max(0, incumbent - Y)] for Y ~ Normal(mean, std^2), elementwise.

    Zero standard deviation yields zero improvement by convention.
    """
    mean, std = np.broadcast_arrays(
        np.asarray(mean, dtype=float), np.asarray(std, dtype=float)
    )
    out = np.zeros(mean.shape)
    pos = std > 0
    g = (incumbent - mean[pos]) / std[pos]
    out[pos] = std[pos] * (g * ndtr(g) + np.exp(-0.5 * g * g) / _SQRT_2PI)
    return np.maximum(out, 0.0)


class AveragedPredictor:
    """Arithmetic average of per-hyper-sample posteriors."""

    def __init__(self, gps):
        self.gps = list(gps)
        if not self.gps:
            raise ValueError("need at least one posterior")

    def mean(self, X: np.ndarray) -> np.ndarray:
        return np.mean([gp.predict(X) for gp in self.gps], axis=0)

    def expected_improvement(self, X: np.ndarray, incumbent: float) -> np.ndarray:
        total = None
        for gp in self.gps:
            mean, std = gp.predict(X, return_std=True)
            ei = expected_improvement(mean, std, incumbent)
            total = ei if total is None else total + ei
        return total / len(self.gps)


@dataclass(frozen=True)
class SearchBudget:
    n_random: int = 1000
    n_starts: int = 10
    tol: float = 1e-4
    initial_step: float = 0.25
    max_moves: int = 10000


def _pattern_search(f, starts: np.ndarray, values: np.ndarray, space: SearchSpace, budget: SearchBudget):
    """Greedy coordinate moves with geometric step shrinkage.

    All starts advance in lockstep so each round costs one batched call;
    trajectories stay independent, so the result matches a one-start-at-a-time
    search exactly.
    """
    widths = space.upper - space.lower
    w = space.width
    X = starts.copy()
    vals = values.copy()
    steps = np.full(X.shape[0], budget.initial_step)
    for _ in range(budget.max_moves):
        active = np.flatnonzero(steps >= budget.tol)
        if active.size == 0:
            break
        cand = np.repeat(X[active], 2 * w, axis=0)
        for a, i in enumerate(active):
            base = a * 2 * w
            for j in range(w):
                d = steps[i] * widths[j]
                cand[base + 2 * j, j] = min(X[i, j] + d, space.upper[j])
                cand[base + 2 * j + 1, j] = max(X[i, j] - d, space.lower[j])
        cvals = f(cand).reshape(active.size, 2 * w)
        best = np.argmax(cvals, axis=1)
        for a, i in enumerate(active):
            if cvals[a, best[a]] > vals[i]:
                vals[i] = cvals[a, best[a]]
                X[i] = cand[a * 2 * w + best[a]]
            else:
                steps[i] *= 0.5
    return X, vals


def maximize(f, space: SearchSpace, rng: np.random.Generator, budget: SearchBudget = SearchBudget()):
    """Maximize a batch-evaluable function over the relaxed box.

    Deterministic given the generator state; ties keep the earliest point.
    """
    X = space.sample(rng, budget.n_random)
    vals = f(X)
    order = np.argsort(-vals, kind="stable")[: budget.n_starts]
    finals, fvals = _pattern_search(f, X[order], vals[order], space, budget)
    ranked = np.argsort(-fvals, kind="stable")
    best = ranked[0]
    return finals[best].copy(), float(fvals[best])


def maximize_acquisition(
    predictor: AveragedPredictor,
    space: SearchSpace,
    incumbent: float,
    rng: np.random.Generator,
    budget: SearchBudget = SearchBudget(),
):
    """Point of the box with the largest hyper-averaged expected improvement."""
    return maximize(
        lambda X: predictor.expected_improvement(X, incumbent), space, rng, budget
    )


def minimize_posterior_mean(
    predictor: AveragedPredictor,
    space: SearchSpace,
    rng: np.random.Generator,
    budget: SearchBudget = SearchBudget(),
):
    """Point of the box with the smallest hyper-averaged posterior mean."""
    x, v = maximize(lambda X: -predictor.mean(X), space, rng, budget)
    return x, -v
