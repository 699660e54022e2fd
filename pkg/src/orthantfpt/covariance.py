"""
Autocovariance models for standardized stationary Gaussian series.

A :class:`CovarianceSequence` holds lags ``rho[0..L]`` with ``rho[0] = 1``;
the correlation matrix of ``k`` consecutive observations is the Toeplitz
matrix built from its first ``k`` lags. ARFIMA(0,d,0) sequences can be
extended to any lag on demand, which the circulant embedding needs when it
pads to a power-of-two length.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, NotNonNegativeDefinite, NotPositiveDefinite, ParameterError, ShapeError
from .num_core import fft, next_power_of_two

EIGEN_CLAMP = 1e-9
IMAG_TOL = 1e-9
PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class CovarianceSequence:
    rho: np.ndarray
    model_tag: str
    d: float | None = None

    @property
    def max_lag(self) -> int:
        return len(self.rho) - 1

    def lags(self, n: int) -> np.ndarray:
        """First ``n`` autocovariances ``rho[0..n-1]``, extending the model if possible."""
        if n <= len(self.rho):
            return self.rho[:n]
        if self.d is not None:
            return arfima_covariance(self.d, n - 1).rho
        raise ShapeError(
            f"covariance '{self.model_tag}' provides {len(self.rho)} lags, {n} requested"
        )

    def describe(self) -> str:
        return self.model_tag


def arfima_covariance(d: float, max_lag: int) -> CovarianceSequence:
    """
    Autocorrelations of ARFIMA(0,d,0) up to ``max_lag``.

    Uses ``rho[k] = rho[k-1] * (d + k - 1) / (k - d)``; every factor lies in
    (0, 2) for |d| < 1/2 so the product is stable for long horizons.
    """
    if not abs(d) < 0.5:
        raise ParameterError(f"ARFIMA requires |d| < 0.5, got d={d}")
    if max_lag < 0:
        raise ParameterError("max_lag must be non-negative")
    k = np.arange(1, max_lag + 1, dtype=float)
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    rho[1:] = np.cumprod((d + k - 1.0) / (k - d))
    return CovarianceSequence(rho=rho, model_tag=f"arfima(d={d:g})", d=float(d))


def load_tabulated_covariance(values) -> CovarianceSequence:
    rho = np.asarray(list(values), dtype=float)
    if rho.ndim != 1 or rho.size == 0:
        raise FormatError("tabulated covariance must be a non-empty list")
    if abs(rho[0] - 1.0) > 1e-12:
        raise FormatError(f"rho[0] must equal 1, got {rho[0]}")
    if not np.all(np.isfinite(rho)):
        raise FormatError("tabulated covariance contains non-finite values")
    if np.any(np.abs(rho) > 1.0 + 1e-12):
        raise FormatError("tabulated correlations must satisfy |rho| <= 1")
    rho[0] = 1.0
    return CovarianceSequence(rho=rho, model_tag="tabulated")


def read_covariance_file(path) -> CovarianceSequence:
    """One real per line, line ``i`` is ``rho[i-1]``; '#' lines are ignored."""
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise FormatError(f"{path}:{lineno}: not a number: {line!r}") from None
    cov = load_tabulated_covariance(values)
    return CovarianceSequence(rho=cov.rho, model_tag=f"file({Path(path).name})")


@dataclass(frozen=True)
class CirculantSpectrum:
    g: np.ndarray
    M: int
    min_eigenvalue: float


def embedding_length(n_points: int) -> int:
    """Power-of-two embedding length for ``n_points`` simulated values."""
    return max(2, next_power_of_two(2 * (n_points - 1)))


def circulant_spectrum(cov: CovarianceSequence, n_points: int) -> CirculantSpectrum:
    """
    Eigenvalues of the circulant matrix embedding the first ``n_points`` lags.

    The base length ``2(n_points - 1)`` is rounded up to a power of two ``M``
    and the even extension is filled with true lags ``0..M/2``; zero padding
    would change the spectrum. Eigenvalues in ``[-1e-9, 0)`` are clamped to
    zero, anything more negative raises :class:`NotNonNegativeDefinite`.
    """
    if n_points < 2:
        raise ParameterError("circulant embedding needs n_points >= 2")
    M = embedding_length(n_points)
    half = cov.lags(M // 2 + 1)
    row = np.concatenate((half, half[-2:0:-1]))
    spec = fft(row)
    if np.max(np.abs(spec.imag)) > IMAG_TOL * max(1.0, np.max(np.abs(spec.real))):
        raise AssertionError("circulant spectrum is not real; embedding is not symmetric")
    g = spec.real.copy()
    lo = float(g.min())
    if lo < -EIGEN_CLAMP:
        raise NotNonNegativeDefinite(
            f"circulant embedding of {cov.describe()} at M={M} has eigenvalue {lo:.3e}"
        )
    g[g < 0.0] = 0.0
    return CirculantSpectrum(g=g, M=M, min_eigenvalue=lo)


def toeplitz_matrix(cov: CovarianceSequence, k: int) -> np.ndarray:
    if k < 1:
        raise ParameterError("dimension k must be >= 1")
    if k > len(cov.rho) and cov.d is None:
        raise ShapeError(f"need {k} lags, covariance has {len(cov.rho)}")
    r = cov.lags(k)
    idx = np.arange(k)
    return r[np.abs(idx[:, None] - idx[None, :])]


def cholesky(sigma) -> np.ndarray:
    """Lower-triangular ``c`` with ``c @ c.T == sigma``."""
    a = np.array(sigma, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError("cholesky needs a square matrix")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12):
        raise ParameterError("cholesky needs a symmetric matrix")
    k = a.shape[0]
    c = np.zeros_like(a)
    for j in range(k):
        pivot = a[j, j] - np.dot(c[j, :j], c[j, :j])
        if pivot <= PIVOT_TOL:
            raise NotPositiveDefinite(f"non-positive pivot {pivot:.3e} at index {j}")
        c[j, j] = np.sqrt(pivot)
        c[j + 1:, j] = (a[j + 1:, j] - c[j + 1:, :j] @ c[j, :j]) / c[j, j]
    return c
