"""Stationary covariance functions over encoded points.

Both families are functions of the ARD-scaled distance
``r = sqrt(sum_j ((a_j - b_j) / ell_j)^2)`` with one lengthscale per encoded
coordinate, one-hot coordinates included.  ``TransformedKernel`` wraps a base
kernel and snaps both arguments onto valid encodings before evaluating it,
which makes the induced Gaussian process exactly constant on every set of
points that share a snapped image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SpaceError
from .space import SearchSpace

FAMILIES = ("matern32", "squared_exponential")


def scaled_distances(A: np.ndarray, B: np.ndarray | None, lengthscales: np.ndarray) -> np.ndarray:
    """Pairwise ARD-scaled distances between rows of ``A`` and ``B``.

    With ``B=None`` the matrix is symmetric and its diagonal is exactly zero.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float)) / lengthscales
    if B is None:
        sq = np.sum(A * A, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (A @ A.T)
        np.fill_diagonal(d2, 0.0)
    else:
        B = np.atleast_2d(np.asarray(B, dtype=float)) / lengthscales
        sqa = np.sum(A * A, axis=1)
        sqb = np.sum(B * B, axis=1)
        d2 = sqa[:, None] + sqb[None, :] - 2.0 * (A @ B.T)
    return np.sqrt(np.maximum(d2, 0.0))


@dataclass
class _Stationary:
    lengthscales: np.ndarray
    amplitude: float = 1.0

    def __post_init__(self):
        ls = np.asarray(self.lengthscales, dtype=float)
        if ls.ndim == 0:
            ls = ls[None]
        if np.any(ls <= 0) or not np.all(np.isfinite(ls)):
            raise ValueError("lengthscales must be positive and finite")
        if not (np.isfinite(self.amplitude) and self.amplitude > 0):
            raise ValueError("amplitude must be positive and finite")
        self.lengthscales = ls
        self.amplitude = float(self.amplitude)

    def _profile(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
        return self._profile(scaled_distances(A, B, self.lengthscales))

    def value(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(self(np.atleast_2d(a), np.atleast_2d(b))[0, 0])

    def diag(self, A: np.ndarray) -> np.ndarray:
        A = np.atleast_2d(np.asarray(A, dtype=float))
        return np.full(A.shape[0], self.amplitude)


class Matern32(_Stationary):
    """amplitude * (1 + sqrt(3) r) * exp(-sqrt(3) r)"""

    def _profile(self, r):
        s = np.sqrt(3.0) * r
        return self.amplitude * (1.0 + s) * np.exp(-s)


class SquaredExponential(_Stationary):
    """amplitude * exp(-r^2 / 2)"""

    def _profile(self, r):
        return self.amplitude * np.exp(-0.5 * r * r)


@dataclass
class TransformedKernel:
    """Evaluate ``base`` on snapped images, giving a cell-constant process."""

    base: _Stationary
    space: SearchSpace

    def __post_init__(self):
        if self.base.lengthscales.shape[0] not in (1, self.space.width):
            raise ValueError("lengthscales do not match the encoded width")

    @property
    def lengthscales(self) -> np.ndarray:
        return self.base.lengthscales

    @property
    def amplitude(self) -> float:
        return self.base.amplitude

    def __call__(self, A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
        TA = self.space.transform(np.atleast_2d(np.asarray(A, dtype=float)))
        TB = None if B is None else self.space.transform(np.atleast_2d(np.asarray(B, dtype=float)))
        return self.base(TA, TB)

    def value(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(self(np.atleast_2d(a), np.atleast_2d(b))[0, 0])

    def diag(self, A: np.ndarray) -> np.ndarray:
        return self.base.diag(np.atleast_2d(np.asarray(A, dtype=float)))


def build_kernel(
    family: str,
    lengthscales,
    amplitude: float = 1.0,
    space: SearchSpace | None = None,
    transform_inputs: bool = False,
):
    """Construct a kernel by family name, optionally input-transformed."""
    if family == "matern32":
        base = Matern32(np.asarray(lengthscales, dtype=float), amplitude)
    elif family == "squared_exponential":
        base = SquaredExponential(np.asarray(lengthscales, dtype=float), amplitude)
    else:
        raise ValueError(f"unknown kernel family {family!r}, expected one of {FAMILIES}")
    if transform_inputs:
        if space is None:
            raise SpaceError("transform_inputs=True needs a search space")
        return TransformedKernel(base, space)
    return base


def gram(kernel, X: np.ndarray, jitter: float = 0.0) -> np.ndarray:
    """Covariance matrix of ``X`` against itself with ``jitter`` on the diagonal."""
    K = kernel(X)
    if jitter:
        K = K + jitter * np.eye(K.shape[0])
    return K
