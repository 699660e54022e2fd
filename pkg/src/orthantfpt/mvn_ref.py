"""
Reference estimators for cross-validation: Genz's hypercube transform and GHK.

Both walk the Cholesky factor ``c`` of the correlation matrix (``X = c Y``
with ``Y`` standard normal, sums over ``j < i`` of ``c[i, j] * y_j``). Genz
averages the product of conditional probabilities over uniform points and
stops on a batch-means 99% error estimate. GHK draws truncated normals by
inversion and reports the sample standard error of its weights.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ParameterError, ShapeError
from .num_core import RandomStream, normal_cdf, sample_uniform
from .path_sim import BLOCK_SIZE
from .fpt import Z99

GENZ_BATCH = 256
GENZ_MIN_BATCHES = 8
TINY = 1e-300


@dataclass(frozen=True)
class GenzResult:
    estimate: float
    error_99: float
    n_evals: int
    hit_eval_cap: bool
    elapsed_seconds: float = 0.0


@dataclass(frozen=True)
class GhkResult:
    estimate: float
    stderr: float
    n_draws: int
    elapsed_seconds: float = 0.0


def _check(S, chol) -> tuple[np.ndarray, np.ndarray]:
    s = np.atleast_1d(np.asarray(S, dtype=float))
    c = np.asarray(chol, dtype=float)
    if s.size == 0:
        raise ParameterError("need at least one threshold")
    if c.shape != (s.size, s.size):
        raise ShapeError(f"Cholesky factor shape {c.shape} does not match k={s.size}")
    return s, c


def _quantile_clipped(p: np.ndarray) -> np.ndarray:
    return special.ndtri(np.clip(p, TINY, 1.0 - 1e-16))


def _sequential_weights(s: np.ndarray, c: np.ndarray, u: np.ndarray) -> np.ndarray:
    """
    Product of conditional probabilities along the Cholesky recursion.

    ``u[:, i]`` is the uniform used to draw ``y_i`` from the normal truncated
    to ``(-inf, upper_i)``; the last column is never needed.
    """
    n, k = u.shape
    y = np.zeros((n, k))
    weight = np.ones(n)
    for i in range(k):
        upper = (s[i] - y[:, :i] @ c[i, :i]) / c[i, i]
        e = normal_cdf(upper)
        weight *= e
        if i < k - 1:
            y[:, i] = _quantile_clipped(u[:, i] * e)
    return weight


def genz_estimate(
    S,
    chol,
    tolerance: float = 1e-4,
    max_evals: int | None = None,
    stream: RandomStream | None = None,
) -> GenzResult:
    """
    Monte Carlo integration of the transformed orthant integral over the unit cube.

    Points are evaluated in batches of 256. After at least 8 batches the run
    stops once ``2.576 * sd(batch means) / sqrt(n_batches) <= tolerance``;
    otherwise it stops when the next batch would exceed ``max_evals``
    (default ``1000 k``), setting ``hit_eval_cap``.
    """
    s, c = _check(S, chol)
    k = s.size
    if tolerance <= 0:
        raise ParameterError("tolerance must be positive")
    start = time.perf_counter()
    if k == 1:
        return GenzResult(float(normal_cdf(s[0] / c[0, 0])), 0.0, 1, False,
                          time.perf_counter() - start)
    if max_evals is None:
        max_evals = 1000 * k
    max_batches = max(2, max_evals // GENZ_BATCH)
    stream = RandomStream(0) if stream is None else stream
    means = []
    err = np.inf
    while len(means) < max_batches:
        u = sample_uniform(stream.child(len(means)), (GENZ_BATCH, k - 1))
        means.append(_sequential_weights(s, c, np.hstack((u, np.zeros((GENZ_BATCH, 1))))).mean())
        nb = len(means)
        if nb >= 2:
            err = Z99 * np.std(means, ddof=1) / np.sqrt(nb)
            if nb >= GENZ_MIN_BATCHES and err <= tolerance:
                break
    n_evals = len(means) * GENZ_BATCH
    hit_cap = not err <= tolerance
    est = float(np.clip(np.mean(means), 0.0, 1.0))
    return GenzResult(est, float(err), n_evals, hit_cap, time.perf_counter() - start)


def ghk_estimate(S, chol, n_draws: int, stream: RandomStream) -> GhkResult:
    """GHK simulator with ``n_draws`` replications in substream blocks of 1024."""
    s, c = _check(S, chol)
    k = s.size
    if n_draws < 1:
        raise ParameterError("n_draws must be >= 1")
    start = time.perf_counter()
    count, mean, m2 = 0, 0.0, 0.0
    for b in range(-(-n_draws // BLOCK_SIZE)):
        size = min(BLOCK_SIZE, n_draws - b * BLOCK_SIZE)
        u = sample_uniform(stream.child(b), (size, k))
        w = _sequential_weights(s, c, u)
        # pairwise mean/M2 merge keeps constant weights at exactly zero variance
        if np.ptp(w) == 0.0:
            w_mean, w_m2 = float(w[0]), 0.0
        else:
            w_mean = float(w.mean())
            w_m2 = float(np.sum((w - w_mean) ** 2))
        delta = w_mean - mean
        total = count + size
        mean += delta * size / total
        m2 += w_m2 + delta * delta * count * size / total
        count = total
    var = m2 / (n_draws - 1) if n_draws > 1 else 0.0
    return GhkResult(float(np.clip(mean, 0.0, 1.0)), float(np.sqrt(var / n_draws)), n_draws,
                     time.perf_counter() - start)
