"""Tree-structured Parzen estimator and random search baselines.

TPE splits the observations at the ``gamma`` quantile of the objective,
fits one factorized Parzen density to each side (``l`` on the good side,
``g`` on the rest) and suggests the candidate drawn from ``l`` with the
best ``log l(x) - log g(x)`` score, which ranks candidates exactly like the
usual ``(gamma + (g/l)(1 - gamma))^-1`` criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri
from sklearn.base import BaseEstimator

from .engine import Suggestion, seed_streams
from .exceptions import InsufficientDataError, InvalidObservationError
from .space import Categorical, Config, Integer, Real, SearchSpace


@dataclass(frozen=True)
class TpeConfig:
    gamma: float = 0.25
    n_candidates: int = 24
    prior_weight: float = 1.0
    bandwidth_rule: str = "adjacent"

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")
        if self.bandwidth_rule != "adjacent":
            raise ValueError(f"unsupported bandwidth rule {self.bandwidth_rule!r}")


def split_observations(ys, gamma: float):
    """Indices of the good (y <= quantile) and bad observations.

    The threshold is the ``ceil(gamma * N)``-th smallest observed value, so
    the good side is never empty.
    """
    ys = np.asarray(ys, dtype=float)
    n = ys.shape[0]
    if n < 2:
        raise InsufficientDataError("need at least two observations to split")
    order = np.argsort(ys, kind="stable")
    y_star = ys[order[math.ceil(gamma * n) - 1]]
    lower = np.flatnonzero(ys <= y_star)
    upper = np.flatnonzero(ys > y_star)
    return lower, upper


class _ContinuousParzen:
    """Truncated-Gaussian bumps at the observations plus a uniform prior
    component.  Bandwidth of a bump is the distance to the farther adjacent
    observation, clipped to [1%, 100%] of the box width."""

    def __init__(self, lower: float, upper: float, values, prior_weight: float):
        self.lower = lower
        self.upper = upper
        self.box = upper - lower
        centers = np.sort(np.asarray(values, dtype=float))
        n = centers.shape[0]
        if n == 0:
            bw = np.empty(0)
        elif n == 1:
            bw = np.array([self.box])
        else:
            gaps_left = np.diff(centers, prepend=centers[0])
            gaps_right = np.diff(centers, append=centers[-1])
            gaps_left[0] = gaps_right[0]
            gaps_right[-1] = gaps_left[-1]
            bw = np.maximum(gaps_left, gaps_right)
        self.centers = centers
        self.bandwidths = np.clip(bw, 0.01 * self.box, self.box)
        self.w_uniform = prior_weight / (n + prior_weight)
        self.w_bump = 1.0 / (n + prior_weight)
        if n:
            self._lo_cdf = ndtr((lower - centers) / self.bandwidths)
            self._hi_cdf = ndtr((upper - centers) / self.bandwidths)

    def pdf(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        p = np.full(x.shape, self.w_uniform / self.box)
        if self.centers.size:
            z = (x[:, None] - self.centers) / self.bandwidths
            dens = np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * self.bandwidths)
            p += self.w_bump * np.sum(dens / (self._hi_cdf - self._lo_cdf), axis=1)
        return p

    def logpdf(self, x) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    def sample(self, rng: np.random.Generator) -> float:
        if rng.uniform() < self.w_uniform or not self.centers.size:
            return float(rng.uniform(self.lower, self.upper))
        i = rng.integers(self.centers.size)
        u = rng.uniform(self._lo_cdf[i], self._hi_cdf[i])
        x = self.centers[i] + self.bandwidths[i] * ndtri(u)
        return float(min(max(x, self.lower), self.upper))


class _DiscreteParzen:
    """Additively smoothed categorical: prob proportional to count + prior."""

    def __init__(self, n_cells: int, observed_indices, prior_weight: float):
        counts = np.bincount(np.asarray(observed_indices, dtype=int), minlength=n_cells)
        weights = counts + prior_weight
        self.probs = weights / weights.sum()

    def pdf(self, idx) -> np.ndarray:
        return self.probs[np.atleast_1d(np.asarray(idx, dtype=int))]

    def logpdf(self, idx) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(idx))

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.choice(self.probs.size, p=self.probs))


class ParzenDensity:
    """Per-dimension product density over valid configurations."""

    def __init__(self, space: SearchSpace, configs, prior_weight: float = 1.0):
        configs = [space.validate_config(c) for c in configs]
        self.space = space
        self._parts = []
        for i, dim in enumerate(space.dims):
            column = [c[i] for c in configs]
            if isinstance(dim, Real):
                self._parts.append(
                    _ContinuousParzen(dim.lower, dim.upper, column, prior_weight)
                )
            elif isinstance(dim, Integer):
                idx = [v - dim.lower for v in column]
                self._parts.append(
                    _DiscreteParzen(dim.upper - dim.lower + 1, idx, prior_weight)
                )
            else:
                idx = [dim.labels.index(v) for v in column]
                self._parts.append(_DiscreteParzen(len(dim.labels), idx, prior_weight))

    def _part_value(self, i: int, value):
        dim = self.space.dims[i]
        if isinstance(dim, Real):
            return value
        if isinstance(dim, Integer):
            return value - dim.lower
        return dim.labels.index(value)

    def logpdf(self, config) -> float:
        config = self.space.validate_config(config)
        total = 0.0
        for i, part in enumerate(self._parts):
            total += float(part.logpdf(self._part_value(i, config[i]))[0])
        return total

    def sample(self, rng: np.random.Generator) -> Config:
        out = []
        for dim, part in zip(self.space.dims, self._parts):
            v = part.sample(rng)
            if isinstance(dim, Real):
                out.append(v)
            elif isinstance(dim, Integer):
                out.append(dim.lower + v)
            else:
                out.append(dim.labels[v])
        return tuple(out)


def fit_parzen(space: SearchSpace, configs, prior_weight: float = 1.0) -> ParzenDensity:
    return ParzenDensity(space, configs, prior_weight)


def random_suggest(space: SearchSpace, rng: np.random.Generator) -> Config:
    """Uniform draw from the relaxed box, decoded."""
    return space.decode(space.sample(rng))


def tpe_suggest(
    space: SearchSpace,
    configs,
    ys,
    rng: np.random.Generator,
    config: TpeConfig = TpeConfig(),
) -> Config:
    """Best of ``n_candidates`` draws from l under the log l - log g score.

    Falls back to a uniform suggestion with fewer than two observations.
    """
    if len(configs) != len(ys):
        raise ValueError("configs and ys must have equal length")
    if len(ys) < 2:
        return random_suggest(space, rng)
    lower, upper = split_observations(ys, config.gamma)
    dens_l = fit_parzen(space, [configs[i] for i in lower], config.prior_weight)
    dens_g = fit_parzen(space, [configs[i] for i in upper], config.prior_weight)
    candidates = [dens_l.sample(rng) for _ in range(config.n_candidates)]
    scores = np.array([dens_l.logpdf(c) - dens_g.logpdf(c) for c in candidates])
    return candidates[int(np.argmax(scores))]


class TpeOptimizer(BaseEstimator):
    """Ask/tell wrapper around ``tpe_suggest`` (minimization)."""

    def __init__(
        self,
        space: SearchSpace,
        tpe: TpeConfig = TpeConfig(),
        n_init: int = 3,
        seed=None,
    ):
        self.space = space
        self.tpe = tpe
        self.n_init = n_init
        self.seed = seed
        self._init_rng, _, self._cand_rng = seed_streams(seed)
        self.configs_: list[Config] = []
        self.y_: list[float] = []

    @property
    def n_observed(self) -> int:
        return len(self.y_)

    def ask(self) -> Suggestion:
        if self.n_observed < self.n_init:
            config = self.space.decode(self.space.sample(self._init_rng))
        else:
            config = tpe_suggest(self.space, self.configs_, self.y_, self._cand_rng, self.tpe)
        return Suggestion(config=config)

    def tell(self, suggestion: Suggestion, y: float) -> None:
        y = float(y)
        if not np.isfinite(y):
            raise InvalidObservationError(f"observed value {y!r} is not finite")
        self.configs_.append(self.space.validate_config(suggestion.config))
        self.y_.append(y)

    def observe(self, config, y: float) -> None:
        self.tell(Suggestion(config=config), y)

    def recommend(self, mode: str = "best_observed") -> Config:
        if mode != "best_observed":
            raise ValueError("TPE only recommends the best observed configuration")
        if not self.y_:
            raise InvalidObservationError("cannot recommend before any observation")
        return self.configs_[int(np.argmin(self.y_))]


class RandomOptimizer(BaseEstimator):
    """Uniform random search through the same ask/tell interface."""

    def __init__(self, space: SearchSpace, n_init: int = 3, seed=None):
        self.space = space
        self.n_init = n_init
        self.seed = seed
        self._rng, _, _ = seed_streams(seed)
        self.configs_: list[Config] = []
        self.y_: list[float] = []

    @property
    def n_observed(self) -> int:
        return len(self.y_)

    def ask(self) -> Suggestion:
        return Suggestion(config=random_suggest(self.space, self._rng))

    def tell(self, suggestion: Suggestion, y: float) -> None:
        y = float(y)
        if not np.isfinite(y):
            raise InvalidObservationError(f"observed value {y!r} is not finite")
        self.configs_.append(self.space.validate_config(suggestion.config))
        self.y_.append(y)

    def observe(self, config, y: float) -> None:
        self.tell(Suggestion(config=config), y)

    def recommend(self, mode: str = "best_observed") -> Config:
        if mode != "best_observed":
            raise ValueError("random search only recommends the best observed configuration")
        if not self.y_:
            raise InvalidObservationError("cannot recommend before any observation")
        return self.configs_[int(np.argmin(self.y_))]
