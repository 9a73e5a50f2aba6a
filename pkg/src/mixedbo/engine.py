"""Sequential Bayesian-optimization loop over a mixed search space.

Three GP strategies share the loop and differ in exactly two switches:

* ``naive``    - plain kernel, stores the snapped encoding of the evaluated
                 configuration (the acquisition argmax is rounded both for
                 evaluation and for the dataset);
* ``basic``    - plain kernel, stores the continuous acquisition argmax and
                 rounds only when evaluating the objective;
* ``proposed`` - like ``basic`` but the kernel snaps its inputs, so the
                 surrogate is constant on every rounding cell.

The optimizer is driven through ``ask``/``tell``: the first ``n_init`` asks
return uniform draws from the box, later asks maximize hyper-averaged
expected improvement under slice-sampled kernel hyperparameters.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from dataclasses import dataclass

from .acquisition import (
    AveragedPredictor,
    SearchBudget,
    maximize_acquisition,
    minimize_posterior_mean,
)
from .exceptions import InvalidObservationError
from .gp import GaussianProcess
from .hypers import NOISELESS_VARIANCE, HyperPrior, sample_hypers
from .kernels import build_kernel
from .space import Config, SearchSpace

GP_STRATEGIES = ("naive", "basic", "proposed")
RECOMMEND_MODES = ("posterior_mean", "best_observed")


@dataclass
class Suggestion:
    """One proposed evaluation.

    ``point`` is the acquisition argmax in the relaxed box, ``config`` the
    valid configuration to evaluate, ``stored`` the input row appended to the
    surrogate dataset when the observation is told back.  Baselines that do
    not work in the box leave ``point`` and ``stored`` as None.
    """

    config: Config
    point: np.ndarray | None = None
    stored: np.ndarray | None = None


def seed_streams(seed) -> tuple[np.random.Generator, ...]:
    """Three independent deterministic streams: init design, hyper chain,
    acquisition probes.  The init stream only depends on the seed, which is
    what keeps paired strategies on identical initial designs."""
    root = np.random.SeedSequence(seed)
    return tuple(np.random.default_rng(s) for s in root.spawn(3))


class BayesOptimizer(BaseEstimator):
    """Ask/tell GP optimizer (minimization).

    Parameters
    ----------
    space : SearchSpace
    strategy : str
        One of ``naive``, ``basic``, ``proposed``.
    kernel_family : str
        ``matern32`` or ``squared_exponential``.
    n_init : int
        Uniform designs returned before the model-based phase starts.
    n_hyper_samples, burn_in : int
        Posterior samples per iteration and warm-started sweeps before them.
    noiseless : bool
        Pin the noise variance at 1e-6 instead of sampling it.
    budget : SearchBudget
        Random-probe and pattern-search effort for the acquisition maximizer.
    """

    def __init__(
        self,
        space: SearchSpace,
        strategy: str = "proposed",
        kernel_family: str = "matern32",
        n_init: int = 3,
        n_hyper_samples: int = 10,
        burn_in: int = 50,
        noiseless: bool = False,
        prior: HyperPrior = HyperPrior(),
        budget: SearchBudget = SearchBudget(),
        seed=None,
    ):
        if strategy not in GP_STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}, expected one of {GP_STRATEGIES}")
        self.space = space
        self.strategy = strategy
        self.kernel_family = kernel_family
        self.n_init = n_init
        self.n_hyper_samples = n_hyper_samples
        self.burn_in = burn_in
        self.noiseless = noiseless
        self.prior = prior
        self.budget = budget
        self.seed = seed
        self._init_rng, self._chain_rng, self._acq_rng = seed_streams(seed)
        self.X_: list[np.ndarray] = []
        self.y_: list[float] = []
        self._chain_state = None
        self._samples = None
        self._posteriors = None
        self._posterior_size = -1

    # -- dataset -------------------------------------------------------------

    @property
    def n_observed(self) -> int:
        return len(self.y_)

    def _make_kernel(self, lengthscales, amplitude):
        return build_kernel(
            self.kernel_family,
            lengthscales,
            amplitude,
            space=self.space,
            transform_inputs=self.strategy == "proposed",
        )

    def tell(self, suggestion: Suggestion, y: float) -> None:
        y = float(y)
        if not np.isfinite(y):
            raise InvalidObservationError(f"observed value {y!r} is not finite")
        stored = suggestion.stored
        if stored is None:
            stored = self.space.encode(suggestion.config)
        self.X_.append(np.asarray(stored, dtype=float))
        self.y_.append(y)

    def observe(self, config, y: float) -> None:
        """Append a historical observation; the encoded configuration stands
        in for the (unknown) relaxed point."""
        config = self.space.validate_config(config)
        self.tell(Suggestion(config=config, stored=self.space.encode(config)), y)

    # -- model ---------------------------------------------------------------

    def _fit_posteriors(self) -> AveragedPredictor:
        """Posteriors for the current dataset under the latest hyper samples."""
        if self._samples is None:
            self._draw_samples()
        if self._posterior_size != self.n_observed:
            X = np.array(self.X_)
            y = np.array(self.y_)
            self._posteriors = AveragedPredictor(
                [
                    GaussianProcess(
                        self._make_kernel(s.lengthscales, s.amplitude),
                        NOISELESS_VARIANCE if self.noiseless else s.noise,
                    ).fit(X, y)
                    for s in self._samples
                ]
            )
            self._posterior_size = self.n_observed
        return self._posteriors

    def _draw_samples(self) -> None:
        self._samples, self._chain_state = sample_hypers(
            np.array(self.X_),
            np.array(self.y_),
            self._make_kernel,
            self.prior,
            noiseless=self.noiseless,
            n_samples=self.n_hyper_samples,
            burn_in=self.burn_in,
            rng=self._chain_rng,
            state=self._chain_state,
        )
        self._posterior_size = -1

    # -- loop ----------------------------------------------------------------

    def ask(self) -> Suggestion:
        if self.n_observed < self.n_init:
            point = self.space.sample(self._init_rng)
        else:
            self._draw_samples()
            predictor = self._fit_posteriors()
            incumbent = min(self.y_)
            point, _ = maximize_acquisition(
                predictor, self.space, incumbent, self._acq_rng, self.budget
            )
        config = self.space.decode(point)
        if self.strategy == "naive":
            stored = self.space.transform(point)
        else:
            stored = point.copy()
        return Suggestion(config=config, point=point, stored=stored)

    def recommend(self, mode: str = "posterior_mean") -> Config:
        if mode not in RECOMMEND_MODES:
            raise ValueError(f"unknown mode {mode!r}, expected one of {RECOMMEND_MODES}")
        if not self.y_:
            raise InvalidObservationError("cannot recommend before any observation")
        if mode == "best_observed":
            best = int(np.argmin(self.y_))
            return self.space.decode(self.X_[best])
        predictor = self._fit_posteriors()
        point, _ = minimize_posterior_mean(predictor, self.space, self._acq_rng, self.budget)
        return self.space.decode(point)
