"""Synthetic objectives drawn lazily from a GP prior over the search space.

Latent values are revealed by exact sequential conditioning: the first query
at a configuration draws from the conditional given everything revealed so
far, using a standard-normal deviate keyed by (seed, configuration), and is
memoized forever after.  ``true_minimum`` enumerates the full grid induced by
a density per real dimension, after which the conditioning set is frozen:
later queries condition on the enumerated grid only, so the function is a
fixed, query-order-independent object shared by every strategy run.

The ground-truth kernel snaps its inputs, making the latent function constant
on every rounding cell.  The default family is the squared exponential, whose
product structure over dimensions admits an exact Kronecker factorization of
the grid draw; that is what keeps the four-dimensional layouts enumerable.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .exceptions import GridTooLargeError
from .kernels import build_kernel, scaled_distances
from .space import Categorical, Config, SearchSpace

GRID_CAP = 10**6
DENSE_CAP = 3000

DEFAULT_AMPLITUDE = 1.0
DEFAULT_LENGTHSCALE = 0.3
DEFAULT_FAMILY = "squared_exponential"


def keyed_normal(seed: int, config: Config) -> float:
    """Standard-normal deviate determined by the seed and the configuration."""
    payload = json.dumps([seed, list(config)]).encode()
    words = np.frombuffer(hashlib.sha256(payload).digest()[:16], dtype=np.uint32)
    return float(np.random.default_rng(np.random.SeedSequence(words.tolist())).standard_normal())


def _robust_cholesky(M: np.ndarray, scale: float) -> np.ndarray:
    """Lower factor with the smallest diagonal ridge (from 1e-12*scale,
    escalating tenfold to 1e-6*scale) that makes the matrix factorizable."""
    if M.shape[0] == 0:
        return np.zeros((0, 0))
    ridge = 1e-12 * scale
    eye = np.eye(M.shape[0])
    while ridge <= 1e-6 * scale * (1 + 1e-12):
        try:
            return cholesky(M + ridge * eye, lower=True)
        except np.linalg.LinAlgError:
            ridge *= 10.0
    raise GridTooLargeError("grid covariance is numerically singular")


def _solve_axis(L: np.ndarray, T: np.ndarray, axis: int, transpose: bool) -> np.ndarray:
    """Apply a triangular solve along one tensor axis."""
    moved = np.moveaxis(T, axis, 0)
    flat = moved.reshape(moved.shape[0], -1)
    if transpose:
        out = solve_triangular(L.T, flat, lower=False)
    else:
        out = solve_triangular(L, flat, lower=True)
    return np.moveaxis(out.reshape(moved.shape), 0, axis)


def _apply_axis(L: np.ndarray, T: np.ndarray, axis: int) -> np.ndarray:
    """Multiply by a matrix along one tensor axis."""
    moved = np.moveaxis(T, axis, 0)
    flat = moved.reshape(moved.shape[0], -1)
    out = L @ flat
    return np.moveaxis(out.reshape((L.shape[0],) + moved.shape[1:]), 0, axis)


class _KronFrozen:
    """Frozen conditioner for a Cartesian grid under a product kernel."""

    def __init__(self, space, axes, blocks, lengthscale_blocks, factors, alpha, amplitude):
        self.space = space
        self.axes = axes
        self.blocks = blocks                  # per-dim encoded axis values
        self.ls_blocks = lengthscale_blocks
        self.factors = factors                # per-dim Cholesky factors
        self.alpha = alpha                    # (kron K)^-1 f / sqrt(amplitude)
        self.amplitude = amplitude

    def _cross(self, config):
        rs = []
        for i, dim in enumerate(self.space.dims):
            if isinstance(dim, Categorical):
                enc = np.zeros((1, len(dim.labels)))
                enc[0, dim.labels.index(config[i])] = 1.0
            else:
                enc = np.array([[float(config[i])]])
            r = scaled_distances(enc, self.blocks[i], self.ls_blocks[i])[0]
            rs.append(np.exp(-0.5 * r * r))
        return rs

    def conditional(self, config) -> tuple[float, float]:
        rs = self._cross(config)
        t = self.alpha
        for r in rs:
            t = np.tensordot(r, t, axes=(0, 0))
        mean = math.sqrt(self.amplitude) * float(t)
        q = 1.0
        for r, L in zip(rs, self.factors):
            v = solve_triangular(L, r, lower=True)
            q *= float(v @ v)
        var = self.amplitude * max(0.0, 1.0 - q)
        return mean, var


class _DenseFrozen:
    """Frozen conditioner over explicitly enumerated rows."""

    def __init__(self, kernel, X, L, z):
        self.kernel = kernel
        self.X = X
        self.L = L
        self.z = z

    def conditional(self, config_point: np.ndarray) -> tuple[float, float]:
        kvec = self.kernel(self.X, config_point[None, :])[:, 0]
        ell = solve_triangular(self.L, kvec, lower=True)
        mean = float(ell @ self.z)
        var = max(0.0, float(self.kernel.amplitude - ell @ ell))
        return mean, var


class GpSampleObjective:
    """Minimization target sampled from a transformed-kernel GP prior.

    Parameters
    ----------
    space : SearchSpace
    seed : int
        Keys every latent deviate; two objectives with equal seed and space
        reveal the same function.
    amplitude, lengthscale : float
        Ground-truth kernel hyperparameters (lengthscale per encoded
        coordinate).
    family : str
        Kernel family of the draw.  Only the squared exponential factorizes
        over dimensions, which the large-grid enumeration path requires.
    """

    def __init__(
        self,
        space: SearchSpace,
        seed: int = 0,
        amplitude: float = DEFAULT_AMPLITUDE,
        lengthscale: float = DEFAULT_LENGTHSCALE,
        family: str = DEFAULT_FAMILY,
        grid_cap: int = GRID_CAP,
    ):
        self.space = space
        self.seed = int(seed)
        self.amplitude = float(amplitude)
        self.family = family
        self.grid_cap = grid_cap
        ls = np.asarray(lengthscale, dtype=float)
        self.lengthscales = np.full(space.width, float(ls)) if ls.ndim == 0 else ls
        self.kernel = build_kernel(
            family, self.lengthscales, self.amplitude, space=space, transform_inputs=True
        )
        self._memo: dict[Config, float] = {}
        self._X = np.zeros((0, space.width))
        self._L = np.zeros((0, 0))
        self._z = np.zeros(0)
        self._frozen = None
        self._min_cache: dict[int, tuple[Config, float]] = {}

    @property
    def n_revealed(self) -> int:
        return len(self._memo)

    # -- queries ---------------------------------------------------------

    def latent(self, config) -> float:
        """Noiseless function value; first query fixes it forever."""
        config = self.space.validate_config(config)
        hit = self._memo.get(config)
        if hit is not None:
            return hit
        if self._frozen is not None:
            if isinstance(self._frozen, _KronFrozen):
                mean, var = self._frozen.conditional(config)
            else:
                mean, var = self._frozen.conditional(self.space.encode(config))
            f = mean + math.sqrt(var) * keyed_normal(self.seed, config)
        else:
            f = self._extend(config)
        self._memo[config] = f
        return f

    def query(self, config, noise_variance: float = 0.0, rng: np.random.Generator | None = None) -> float:
        """Latent value plus Normal(0, noise_variance) observation noise."""
        f = self.latent(config)
        if noise_variance < 0 or not np.isfinite(noise_variance):
            raise ValueError("noise variance must be finite and nonnegative")
        if noise_variance:
            if rng is None:
                raise ValueError("noisy queries need a random generator")
            f += rng.normal(0.0, math.sqrt(noise_variance))
        return float(f)

    def __call__(self, config) -> float:
        return self.latent(config)

    def _extend(self, config) -> float:
        x = self.space.encode(config)
        n = self._z.size
        if n:
            kvec = self.kernel(self._X, x[None, :])[:, 0]
            ell = solve_triangular(self._L, kvec, lower=True)
            d2 = self.amplitude - float(ell @ ell)
        else:
            ell = np.zeros(0)
            d2 = self.amplitude
        # keep the factor invertible when queries nearly coincide
        d = max(math.sqrt(max(d2, 0.0)), 1e-9 * math.sqrt(self.amplitude))
        z = keyed_normal(self.seed, config)
        f = float(ell @ self._z) + d * z
        L = np.zeros((n + 1, n + 1))
        L[:n, :n] = self._L
        L[n, :n] = ell
        L[n, n] = d
        self._L = L
        self._X = np.vstack([self._X, x[None, :]])
        self._z = np.append(self._z, z)
        return f

    # -- enumeration -------------------------------------------------------

    def true_minimum(self, grid_density: int = 200) -> tuple[Config, float]:
        """Grid minimizer and value; real dimensions are gridded at
        ``grid_density`` points.  The first call enumerates every grid
        configuration and freezes the conditioning set."""
        cached = self._min_cache.get(grid_density)
        if cached is not None:
            return cached
        if self._frozen is not None:
            raise GridTooLargeError("true_minimum was already computed at another density")
        axes = self.space.grid_axes(grid_density)
        total = math.prod(len(a) for a in axes)
        if total > self.grid_cap:
            raise GridTooLargeError(f"grid has {total} configurations, cap is {self.grid_cap}")
        if self._z.size == 0 and self.family == "squared_exponential":
            result = self._enumerate_kron(axes)
        elif total + self._z.size <= DENSE_CAP:
            result = self._enumerate_dense(axes)
        else:
            raise GridTooLargeError(
                f"grid has {total} configurations; only the squared-exponential "
                f"family factorizes beyond {DENSE_CAP}"
            )
        self._min_cache[grid_density] = result
        return result

    def _enumerate_kron(self, axes) -> tuple[Config, float]:
        blocks, ls_blocks, factors = [], [], []
        for i, dim in enumerate(self.space.dims):
            sl = self.space.block(i)
            if isinstance(dim, Categorical):
                enc = np.eye(len(dim.labels))
            else:
                enc = np.array([[float(v)] for v in axes[i]])
            ls = self.lengthscales[sl]
            r = scaled_distances(enc, None, ls)
            R = np.exp(-0.5 * r * r)
            blocks.append(enc)
            ls_blocks.append(ls)
            factors.append(_robust_cholesky(R, 1.0))
        sizes = tuple(len(a) for a in axes)
        configs = list(itertools.product(*axes))
        z = np.fromiter(
            (keyed_normal(self.seed, c) for c in configs), dtype=float, count=len(configs)
        )
        t = z.reshape(sizes)
        for axis, L in enumerate(factors):
            t = _apply_axis(L, t, axis)
        f = math.sqrt(self.amplitude) * t
        alpha = f / math.sqrt(self.amplitude)
        for axis, L in enumerate(factors):
            alpha = _solve_axis(L, alpha, axis, transpose=False)
            alpha = _solve_axis(L, alpha, axis, transpose=True)
        flat = f.reshape(-1)
        self._memo.update(zip(configs, flat.tolist()))
        self._frozen = _KronFrozen(
            self.space, axes, blocks, ls_blocks, factors, alpha, self.amplitude
        )
        best = int(np.argmin(flat))
        return configs[best], float(flat[best])

    def _enumerate_dense(self, axes) -> tuple[Config, float]:
        configs = [c for c in itertools.product(*axes) if c not in self._memo]
        X_new = np.array([self.space.encode(c) for c in configs])
        n_old = self._z.size
        K_new = self.kernel(X_new)
        if n_old:
            K_cross = self.kernel(self._X, X_new)
            B = solve_triangular(self._L, K_cross, lower=True)
            S = K_new - B.T @ B
        else:
            B = np.zeros((0, len(configs)))
            S = K_new
        L_S = _robust_cholesky(S, self.amplitude)
        z_new = np.fromiter(
            (keyed_normal(self.seed, c) for c in configs), dtype=float, count=len(configs)
        )
        f_new = B.T @ self._z + L_S @ z_new
        n = n_old + len(configs)
        L = np.zeros((n, n))
        L[:n_old, :n_old] = self._L
        L[n_old:, :n_old] = B.T
        L[n_old:, n_old:] = L_S
        self._L = L
        self._X = np.vstack([self._X, X_new]) if n_old else X_new
        self._z = np.append(self._z, z_new)
        self._memo.update(zip(configs, f_new.tolist()))
        self._frozen = _DenseFrozen(self.kernel, self._X, self._L, self._z)
        # the minimum is taken over grid configurations only
        grid_vals = [(self._memo[c], c) for c in itertools.product(*axes)]
        best_val, best_cfg = min(grid_vals, key=lambda t: t[0])
        return best_cfg, float(best_val)
