"""Kernel-hyperparameter posterior sampling with univariate slice updates.

Lengthscales and amplitude carry log-normal(0, 1) priors, the noise variance
a log-normal(-4, 1) prior.  Each sweep applies one stepping-out/shrinkage
slice update per parameter in log space.  Chains are warm-started: callers
keep the last state and pass it back on the next call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import SamplerStuckError, SingularModelError
from .gp import log_marginal_likelihood

NOISELESS_VARIANCE = 1e-6
MAX_SHRINK = 1000
MAX_STEPOUT = 200


@dataclass(frozen=True)
class HyperPrior:
    lengthscale_log_mean: float = 0.0
    lengthscale_log_std: float = 1.0
    amplitude_log_mean: float = 0.0
    amplitude_log_std: float = 1.0
    noise_log_mean: float = -4.0
    noise_log_std: float = 1.0


@dataclass
class HyperSample:
    lengthscales: np.ndarray
    amplitude: float
    noise: float


def log_normal_logpdf(x: float, log_mean: float, log_std: float) -> float:
    """Density of a log-normal over the positive parameter itself."""
    if x <= 0:
        return -np.inf
    z = (math.log(x) - log_mean) / log_std
    return -math.log(x) - math.log(log_std) - 0.5 * z * z - 0.5 * math.log(2.0 * math.pi)


def slice_sample_step(
    current: float,
    log_density,
    rng: np.random.Generator,
    step_width: float = 1.0,
) -> float:
    """One slice-sampling update of a positive parameter.

    The update runs in log space (with the change-of-variables correction),
    so the returned value leaves the distribution with density
    ``exp(log_density)`` over the positive reals invariant.
    """
    if current <= 0:
        raise ValueError("slice_sample_step needs a positive current value")

    def f(theta: float) -> float:
        val = log_density(math.exp(theta))
        return val + theta if np.isfinite(val) else -np.inf

    theta0 = math.log(current)
    f0 = f(theta0)
    if not np.isfinite(f0):
        raise ValueError("log density must be finite at the current value")
    level = f0 + math.log(rng.uniform())

    left = theta0 - step_width * rng.uniform()
    right = left + step_width
    steps = 0
    while f(left) > level and steps < MAX_STEPOUT:
        left -= step_width
        steps += 1
    steps = 0
    while f(right) > level and steps < MAX_STEPOUT:
        right += step_width
        steps += 1

    for _ in range(MAX_SHRINK):
        theta = rng.uniform(left, right)
        if f(theta) > level:
            return math.exp(theta)
        if theta < theta0:
            left = theta
        else:
            right = theta
    raise SamplerStuckError(f"no acceptance after {MAX_SHRINK} shrink steps")


def sample_hypers(
    X: np.ndarray,
    y: np.ndarray,
    make_kernel,
    prior: HyperPrior = HyperPrior(),
    *,
    noiseless: bool = False,
    n_samples: int = 10,
    burn_in: int = 50,
    rng: np.random.Generator,
    state: HyperSample | None = None,
) -> tuple[list[HyperSample], HyperSample]:
    """Draw posterior samples of (lengthscales, amplitude, noise).

    ``make_kernel(lengthscales, amplitude)`` builds the covariance whose
    marginal likelihood defines the posterior.  With ``noiseless=True`` the
    noise variance is pinned at ``NOISELESS_VARIANCE`` instead of sampled.
    Returns the samples and the final chain state for warm-starting.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    width = X.shape[1]
    if state is None:
        noise0 = NOISELESS_VARIANCE if noiseless else math.exp(prior.noise_log_mean)
        state = HyperSample(np.ones(width), 1.0, noise0)

    ls = np.array(state.lengthscales, dtype=float)
    amplitude = float(state.amplitude)
    noise = float(state.noise)

    def lml(ls_vec, amp, nz) -> float:
        try:
            return log_marginal_likelihood(make_kernel(ls_vec, amp), X, y, nz)
        except SingularModelError:
            return -np.inf

    def sweep():
        nonlocal ls, amplitude, noise
        for j in range(width):
            def target(v, j=j):
                trial = ls.copy()
                trial[j] = v
                return lml(trial, amplitude, noise) + log_normal_logpdf(
                    v, prior.lengthscale_log_mean, prior.lengthscale_log_std
                )
            ls[j] = slice_sample_step(ls[j], target, rng)

        def target_amp(v):
            return lml(ls, v, noise) + log_normal_logpdf(
                v, prior.amplitude_log_mean, prior.amplitude_log_std
            )
        amplitude = slice_sample_step(amplitude, target_amp, rng)

        if not noiseless:
            def target_noise(v):
                return lml(ls, amplitude, v) + log_normal_logpdf(
                    v, prior.noise_log_mean, prior.noise_log_std
                )
            noise = slice_sample_step(noise, target_noise, rng)

    for _ in range(burn_in):
        sweep()
    samples = []
    for _ in range(n_samples):
        sweep()
        samples.append(HyperSample(ls.copy(), amplitude, noise))
    return samples, HyperSample(ls.copy(), amplitude, noise)
