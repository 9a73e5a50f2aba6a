"""Slice-sampler correctness and hyperparameter posterior behaviour."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from mixedbo import HyperPrior, HyperSample, Matern32, sample_hypers, slice_sample_step
from mixedbo.exceptions import SamplerStuckError
from mixedbo.hypers import NOISELESS_VARIANCE, log_normal_logpdf


def test_log_normal_logpdf_matches_scipy():
    dist = stats.lognorm(s=1.0, scale=math.exp(-4.0))
    for x in [1e-4, 0.01, 0.5, 3.0]:
        assert log_normal_logpdf(x, -4.0, 1.0) == pytest.approx(dist.logpdf(x), rel=1e-12)
    assert log_normal_logpdf(0.0, 0.0, 1.0) == -np.inf
    assert log_normal_logpdf(-1.0, 0.0, 1.0) == -np.inf


def test_slice_step_leaves_log_normal_invariant():
    # chained draws from the prior must keep log x at mean 0, std 1
    rng = np.random.default_rng(0)
    target = lambda v: log_normal_logpdf(v, 0.0, 1.0)
    x = 1.0
    draws = np.empty(10000)
    for i in range(draws.size):
        x = slice_sample_step(x, target, rng)
        draws[i] = x
    logs = np.log(draws)
    assert abs(logs.mean()) < 0.05
    assert abs(logs.std() - 1.0) < 0.05
    assert np.all(draws > 0)


def test_slice_step_calibration_ks():
    rng = np.random.default_rng(1)
    target = lambda v: log_normal_logpdf(v, 0.0, 1.0)
    x = 1.0
    draws = np.empty(10000)
    for i in range(draws.size):
        x = slice_sample_step(x, target, rng)
        draws[i] = x
    ks = stats.kstest(draws, stats.lognorm(s=1.0).cdf).statistic
    assert ks < 0.03


def test_slice_step_deterministic_given_rng():
    target = lambda v: log_normal_logpdf(v, 0.0, 1.0)
    a = slice_sample_step(2.0, target, np.random.default_rng(7))
    b = slice_sample_step(2.0, target, np.random.default_rng(7))
    assert a == b


def test_slice_step_input_validation():
    target = lambda v: log_normal_logpdf(v, 0.0, 1.0)
    with pytest.raises(ValueError):
        slice_sample_step(-1.0, target, np.random.default_rng(0))
    with pytest.raises(ValueError):
        slice_sample_step(1.0, lambda v: -np.inf, np.random.default_rng(0))


def test_slice_step_raises_when_stuck():
    # finite only on the initial evaluation, -inf for every candidate after
    calls = iter(range(10**9))

    def trap(v):
        return 0.0 if next(calls) == 0 else -np.inf

    with pytest.raises(SamplerStuckError):
        slice_sample_step(1.0, trap, np.random.default_rng(3))


def _make_kernel(ls, amp):
    return Matern32(ls, amp)


def test_sample_hypers_shapes_and_positivity():
    rng = np.random.default_rng(5)
    X = rng.uniform(0.0, 3.0, size=(8, 2))
    y = np.sin(X[:, 0]) + 0.1 * rng.normal(size=8)
    samples, state = sample_hypers(
        X, y, _make_kernel, n_samples=4, burn_in=3, rng=rng
    )
    assert len(samples) == 4
    assert isinstance(state, HyperSample)
    for s in samples:
        assert s.lengthscales.shape == (2,)
        assert np.all(s.lengthscales > 0)
        assert s.amplitude > 0
        assert s.noise > 0


def test_sample_hypers_noiseless_pins_noise():
    rng = np.random.default_rng(6)
    X = rng.uniform(0.0, 3.0, size=(6, 1))
    y = np.cos(X[:, 0])
    samples, state = sample_hypers(
        X, y, _make_kernel, noiseless=True, n_samples=3, burn_in=2, rng=rng
    )
    assert all(s.noise == NOISELESS_VARIANCE for s in samples)
    assert state.noise == NOISELESS_VARIANCE


def test_sample_hypers_deterministic_and_warm_startable():
    rng_a = np.random.default_rng(11)
    rng_b = np.random.default_rng(11)
    X = np.linspace(0.0, 2.0, 6)[:, None]
    y = np.array([0.1, 0.4, -0.2, 0.0, 0.5, -0.1])
    sa, state_a = sample_hypers(X, y, _make_kernel, n_samples=3, burn_in=2, rng=rng_a)
    sb, state_b = sample_hypers(X, y, _make_kernel, n_samples=3, burn_in=2, rng=rng_b)
    for u, v in zip(sa, sb):
        assert np.array_equal(u.lengthscales, v.lengthscales)
        assert u.amplitude == v.amplitude and u.noise == v.noise
    # continuing from the returned state must equal one longer chain
    sa2, _ = sample_hypers(X, y, _make_kernel, n_samples=2, burn_in=0, rng=rng_a, state=state_a)
    sb2, _ = sample_hypers(X, y, _make_kernel, n_samples=2, burn_in=0, rng=rng_b, state=state_b)
    for u, v in zip(sa2, sb2):
        assert np.array_equal(u.lengthscales, v.lengthscales)
        assert u.amplitude == v.amplitude


def test_posterior_concentrates_near_generating_lengthscale():
    # data drawn with lengthscale 1: the sampled posterior should not wander
    # an order of magnitude away
    rng = np.random.default_rng(2024)
    X = np.sort(rng.uniform(0.0, 5.0, size=30))[:, None]
    K = Matern32(np.array([1.0]))(X) + 1e-10 * np.eye(30)
    y = np.linalg.cholesky(K) @ rng.normal(size=30)
    samples, _ = sample_hypers(
        X, y, _make_kernel, noiseless=True, n_samples=20, burn_in=30, rng=rng
    )
    med = float(np.median([s.lengthscales[0] for s in samples]))
    assert 0.5 <= med <= 2.0


def test_prior_defaults():
    prior = HyperPrior()
    assert prior.lengthscale_log_mean == 0.0
    assert prior.amplitude_log_std == 1.0
    assert prior.noise_log_mean == -4.0
