"""Bayesian optimization over mixed real/integer/categorical search spaces.

The package centers on a Gaussian-process surrogate whose kernel snaps its
inputs onto valid configurations before measuring similarity, so the model is
constant on every rounding cell and never wastes evaluations resolving
differences the objective cannot express.
"""

from .acquisition import (
    AveragedPredictor,
    SearchBudget,
    expected_improvement,
    maximize,
    maximize_acquisition,
    minimize_posterior_mean,
)
from .baselines import (
    ParzenDensity,
    RandomOptimizer,
    TpeConfig,
    TpeOptimizer,
    fit_parzen,
    random_suggest,
    split_observations,
    tpe_suggest,
)
from .engine import GP_STRATEGIES, BayesOptimizer, Suggestion, seed_streams
from .exceptions import (
    ExternalObjectiveError,
    GridTooLargeError,
    IncompleteGridError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidObservationError,
    InvalidPointError,
    MixedBoError,
    SamplerStuckError,
    SingularModelError,
    SpaceError,
)
from .gp import GaussianProcess, log_marginal_likelihood
from .harness import (
    LAYOUTS,
    STRATEGIES,
    ExperimentConfig,
    RunRecord,
    SubprocessObjective,
    SummaryRow,
    emit_outputs,
    make_layout,
    read_records,
    run_experiment,
    summarize,
    write_records,
    write_summary,
)
from .hypers import HyperPrior, HyperSample, sample_hypers, slice_sample_step
from .kernels import Matern32, SquaredExponential, TransformedKernel, build_kernel, gram, scaled_distances
from .space import Categorical, Integer, Real, SearchSpace, load_space
from .synthetic import GpSampleObjective

__version__ = "0.1.0"

__all__ = [
    "AveragedPredictor",
    "BayesOptimizer",
    "Categorical",
    "ExperimentConfig",
    "ExternalObjectiveError",
    "GaussianProcess",
    "GpSampleObjective",
    "GridTooLargeError",
    "GP_STRATEGIES",
    "HyperPrior",
    "HyperSample",
    "IncompleteGridError",
    "InsufficientDataError",
    "Integer",
    "InvalidConfigError",
    "InvalidObservationError",
    "InvalidPointError",
    "LAYOUTS",
    "Matern32",
    "MixedBoError",
    "ParzenDensity",
    "RandomOptimizer",
    "Real",
    "RunRecord",
    "SamplerStuckError",
    "SearchBudget",
    "SearchSpace",
    "SingularModelError",
    "SpaceError",
    "SquaredExponential",
    "STRATEGIES",
    "SubprocessObjective",
    "Suggestion",
    "seed_streams",
    "SummaryRow",
    "TpeConfig",
    "TpeOptimizer",
    "TransformedKernel",
    "build_kernel",
    "emit_outputs",
    "expected_improvement",
    "fit_parzen",
    "gram",
    "scaled_distances",
    "load_space",
    "log_marginal_likelihood",
    "make_layout",
    "maximize",
    "maximize_acquisition",
    "minimize_posterior_mean",
    "random_suggest",
    "read_records",
    "run_experiment",
    "sample_hypers",
    "slice_sample_step",
    "split_observations",
    "summarize",
    "tpe_suggest",
    "write_records",
    "write_summary",
]
