"""Seeded random draws and the ridge solver behind every readout fit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DataError, NumericalError, ParameterError

__all__ = ["Rng", "Readout", "uniform_matrix", "ridge_fit"]

_SEED_MASK = (1 << 64) - 1


def as_2d(a) -> np.ndarray:
    """Coerce to a float matrix; 1-D input becomes a single column."""
    a = np.asarray(a, dtype=float)
    return a[:, None] if a.ndim == 1 else a


class Rng:
    """Deterministic random stream keyed by a 64-bit seed (numpy PCG64).

    Two instances built from the same seed produce bit-identical draw
    sequences on the same platform.  Streams are single-owner: never share
    one across concurrent tasks, create children with :meth:`derive`.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _SEED_MASK
        self._gen = np.random.default_rng(self.seed)

    def uniform(self, lo: float, hi: float, size=None):
        """Draw uniformly from [lo, hi]."""
        if lo > hi:
            raise ParameterError(f"empty uniform range [{lo}, {hi}]")
        return self._gen.uniform(lo, hi, size)

    def gaussian(self, mu: float, sigma: float, size=None):
        """Draw from a normal distribution with standard deviation sigma."""
        if sigma < 0:
            raise ParameterError(f"gaussian sigma must be >= 0, got {sigma}")
        return self._gen.normal(mu, sigma, size)

    def derive(self, offset: int) -> "Rng":
        """Fresh stream seeded with ``seed + offset`` (mod 2**64)."""
        return Rng(self.seed + int(offset))

    def __repr__(self):
        return f"Rng(seed={self.seed})"


def uniform_matrix(rng: Rng, rows: int, cols: int, lo: float, hi: float,
                   density: float = 1.0) -> np.ndarray:
    """Random (rows, cols) matrix with entries uniform on [lo, hi].

    With density < 1 every entry is independently zeroed with probability
    1 - density.  Values are drawn first, in row-major order, then the keep
    mask, so a given seed always yields the same matrix.
    """
    if rows < 0 or cols < 0:
        raise ParameterError(f"negative shape ({rows}, {cols})")
    if lo > hi:
        raise ParameterError(f"invalid range [{lo}, {hi}]")
    if not 0.0 < density <= 1.0:
        raise ParameterError(f"density must be in (0, 1], got {density}")
    values = rng.uniform(lo, hi, (rows, cols))
    if density < 1.0:
        keep = rng.uniform(0.0, 1.0, (rows, cols)) < density
        values = np.where(keep, values, 0.0)
    return values


@dataclass
class Readout:
    """Affine output map y = W x + b fitted by ridge regression."""

    weights: np.ndarray    # (n_outputs, n_features)
    intercept: np.ndarray  # (n_outputs,)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.weights.shape[0]

    def predict(self, features) -> np.ndarray:
        features = as_2d(features)
        if features.shape[1] != self.n_features:
            raise ParameterError(
                f"readout expects {self.n_features} features, got {features.shape[1]}")
        return features @ self.weights.T + self.intercept


def ridge_fit(features, targets, gamma: float) -> Readout:
    """Fit W, b minimizing ||Y - X W' - b||^2 + gamma * ||W||_F^2.

    The intercept is excluded from the penalty.  Solved through the normal
    equations of the system augmented with a constant column, factorized by
    Cholesky; the normal matrix is positive definite whenever gamma > 0.
    """
    X = as_2d(features)
    Y = as_2d(targets)
    if X.shape[0] != Y.shape[0]:
        raise ParameterError(
            f"row mismatch: {X.shape[0]} feature rows vs {Y.shape[0]} target rows")
    if X.shape[0] < 1:
        raise ParameterError("ridge_fit needs at least one sample")
    if gamma < 0:
        raise ParameterError(f"gamma must be >= 0, got {gamma}")
    if not (np.isfinite(X).all() and np.isfinite(Y).all()):
        raise DataError("ridge_fit inputs contain non-finite values")

    n, d = X.shape
    A = np.hstack([X, np.ones((n, 1))])
    G = A.T @ A
    G[np.arange(d), np.arange(d)] += gamma  # last diagonal entry (intercept) untouched
    rhs = A.T @ Y
    try:
        coef = cho_solve(cho_factor(G), rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"singular normal matrix in ridge fit (gamma={gamma}, {n} samples, "
            f"{d} features); increase gamma or provide more samples") from exc
    return Readout(weights=coef[:d].T.copy(), intercept=coef[d].copy())
