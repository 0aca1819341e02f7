"""Haar-random unitaries and Monte Carlo versions of the group averages.

Sampling uses the QR decomposition of a complex Ginibre matrix with the
R-diagonal phase correction, which is exactly Haar distributed.  All samplers
take an explicit numpy Generator; use rng_streams to derive independent
per-worker streams from one seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DimensionMismatchError, as_matrix
from .qobj import UnitaryOp
from .symmetry import build_split


@dataclass(frozen=True)
class McEstimate:
    """Empirical mean with its standard error (elementwise for matrices)."""

    mean: np.ndarray | float
    n_samples: int
    std_error: np.ndarray | float

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if np.any(np.asarray(self.std_error) < 0):
            raise ValueError("std_error must be nonnegative")


def rng_streams(seed: int, n: int) -> list[np.random.Generator]:
    """n independent generators derived from (seed, stream index)."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def haar_sample(d: int, rng: np.random.Generator) -> UnitaryOp:
    """Draw a Haar-random d x d unitary."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return UnitaryOp(q)


class _MatrixAccumulator:
    """Running elementwise mean and standard error over matrix samples."""

    def __init__(self, shape):
        self._sum = np.zeros(shape, dtype=complex)
        self._sum_sq = np.zeros(shape, dtype=float)
        self._n = 0

    def add(self, sample: np.ndarray) -> None:
        self._sum += sample
        self._sum_sq += np.abs(sample) ** 2
        self._n += 1

    def estimate(self) -> McEstimate:
        mean = self._sum / self._n
        var = np.maximum(self._sum_sq / self._n - np.abs(mean) ** 2, 0.0)
        return McEstimate(mean=mean, n_samples=self._n, std_error=np.sqrt(var / self._n))


def average_channel_exact(x) -> np.ndarray:
    """Haar average of U X U^dagger: tr(X)/d times the identity."""
    m = as_matrix(x)
    d = m.shape[0]
    if m.shape != (d, d):
        raise DimensionMismatchError(f"expected square matrix, got {m.shape}")
    return np.trace(m) / d * np.eye(d, dtype=complex)


def average_channel_mc(x, n: int, rng: np.random.Generator) -> McEstimate:
    """Monte Carlo estimate of the Haar average of U X U^dagger."""
    m = as_matrix(x)
    if n < 1:
        raise ValueError("n must be >= 1")
    d = m.shape[0]
    acc = _MatrixAccumulator(m.shape)
    for _ in range(n):
        u = haar_sample(d, rng).mat
        acc.add(u @ m @ u.conj().T)
    return acc.estimate()


def _split_dim(y: np.ndarray) -> int:
    n = y.shape[0]
    d = math.isqrt(n)
    if y.shape != (n, n) or d * d != n:
        raise DimensionMismatchError(f"twirl expects a square matrix on d*d dims, got {y.shape}")
    return d


def twirl_exact(y) -> np.ndarray:
    """Haar average of (U (x) U) Y (U (x) U)^dagger in closed form.

    The image is tr(Y P+)/d+ P+ + tr(Y P-)/d- P-; the expression is linear,
    so it applies to arbitrary (not only selfadjoint) operators.
    """
    m = as_matrix(y)
    d = _split_dim(m)
    split = build_split(d)
    w_plus = np.einsum("ij,ji->", m, split.p_plus) / split.dim_plus
    w_minus = np.einsum("ij,ji->", m, split.p_minus) / split.dim_minus
    return w_plus * split.p_plus + w_minus * split.p_minus


def twirl_mc(y, n: int, rng: np.random.Generator) -> McEstimate:
    """Monte Carlo estimate of the two-copy twirl of Y."""
    m = as_matrix(y)
    if n < 1:
        raise ValueError("n must be >= 1")
    d = _split_dim(m)
    acc = _MatrixAccumulator(m.shape)
    for _ in range(n):
        u = haar_sample(d, rng).mat
        uu = np.kron(u, u)
        acc.add(uu @ m @ uu.conj().T)
    return acc.estimate()


def scalar_mc(samples: np.ndarray) -> McEstimate:
    """Mean and standard error of a vector of scalar Monte Carlo samples."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("samples must be a nonempty 1D array")
    n = arr.size
    se = float(arr.std(ddof=0) / math.sqrt(n))
    return McEstimate(mean=float(arr.mean()), n_samples=n, std_error=se)
