"""Exact Gaussian-process regression via Cholesky factorization."""

from __future__ import annotations

import numpy as np
from scipy.linalg import cholesky, solve_triangular
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import InvalidObservationError, SingularModelError

BASE_JITTER = 1e-8
MAX_JITTER = 1e-4


def _chol_with_jitter(K: np.ndarray, amplitude: float) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor, escalating the diagonal jitter tenfold on failure.

    Jitter starts at ``1e-8 * amplitude`` and gives up past ``1e-4 * amplitude``.
    """
    jitter = BASE_JITTER * amplitude
    eye = np.eye(K.shape[0])
    while jitter <= MAX_JITTER * amplitude * (1 + 1e-12):
        try:
            L = cholesky(K + jitter * eye, lower=True)
            return L, jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise SingularModelError(
        f"Gram matrix not factorizable at jitter {MAX_JITTER * amplitude:g}"
    )


class GaussianProcess(BaseEstimator, RegressorMixin):
    """GP regressor with a fixed kernel and observation-noise variance.

    An empty training set is allowed and yields the prior: zero mean and the
    kernel's diagonal as variance.

    Parameters
    ----------
    kernel : callable
        Covariance object with ``__call__(A, B=None)``, ``diag`` and an
        ``amplitude`` attribute.
    noise : float
        Observation-noise variance added to the training diagonal.
    """

    def __init__(self, kernel, noise: float = 0.0):
        self.kernel = kernel
        self.noise = noise

    def fit(self, X, y):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} values")
        if y.size and not np.all(np.isfinite(y)):
            raise InvalidObservationError("observations must be finite")
        if not (np.isfinite(self.noise) and self.noise >= 0):
            raise ValueError("noise variance must be nonnegative")
        self.X_train_ = X
        self.y_train_ = y
        n = X.shape[0]
        if n == 0:
            self.L_ = np.zeros((0, 0))
            self.alpha_ = np.zeros(0)
            self.jitter_ = 0.0
            self.log_marginal_likelihood_ = 0.0
            return self
        K = self.kernel(X) + self.noise * np.eye(n)
        self.L_, self.jitter_ = _chol_with_jitter(K, self.kernel.amplitude)
        self.alpha_ = solve_triangular(
            self.L_.T, solve_triangular(self.L_, y, lower=True), lower=False
        )
        self.log_marginal_likelihood_ = float(
            -0.5 * y @ self.alpha_
            - np.sum(np.log(np.diag(self.L_)))
            - 0.5 * n * np.log(2.0 * np.pi)
        )
        return self

    def predict(self, X, return_std: bool = False):
        if not hasattr(self, "X_train_"):
            raise NotFittedError("call fit before predict")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.X_train_.shape[0] == 0:
            mean = np.zeros(X.shape[0])
            if return_std:
                return mean, np.sqrt(self.kernel.diag(X))
            return mean
        k_star = self.kernel(self.X_train_, X)
        mean = k_star.T @ self.alpha_
        if not return_std:
            return mean
        v = solve_triangular(self.L_, k_star, lower=True)
        var = self.kernel.diag(X) - np.sum(v * v, axis=0)
        return mean, np.sqrt(np.maximum(var, 0.0))


def log_marginal_likelihood(kernel, X, y, noise: float = 0.0) -> float:
    """Marginal log-likelihood of ``y`` under the GP prior, fit included."""
    return GaussianProcess(kernel, noise).fit(X, y).log_marginal_likelihood_
