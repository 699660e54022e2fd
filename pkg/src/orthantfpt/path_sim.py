"""
Sample paths X_1..X_k of a zero-mean, unit-variance stationary Gaussian series.

Two exact samplers are provided. Davies-Harte draws complex Gaussian weights
on the circulant spectrum and needs one length-M FFT per path. Durbin-Levinson
generates each value from its best linear predictor and costs O(k^2) per path;
it is the fallback when the circulant embedding is not non-negative definite.

Paths are produced in fixed blocks of ``BLOCK_SIZE`` and block ``b`` draws from
``stream.child(b)``. Output therefore depends only on the seed and the number
of paths, never on how many workers generated the blocks.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .covariance import CirculantSpectrum, CovarianceSequence, circulant_spectrum
from .errors import NotNonNegativeDefinite, NotPositiveDefinite, ParameterError, ShapeError
from .num_core import RandomStream, fft, sample_standard_normal

BLOCK_SIZE = 1024
IMAG_RESIDUE_TOL = 1e-9
METHODS = ("auto", "davies_harte", "durbin_levinson")
WORKERS_ENV = "ORTHANT_FPT_WORKERS"


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class DaviesHartePlan:
    spectrum: CirculantSpectrum
    n_points: int
    sqrt_g: np.ndarray
    cov_tag: str = ""

    @property
    def M(self) -> int:
        return self.spectrum.M


@dataclass(frozen=True)
class DurbinLevinsonPlan:
    """Prediction coefficients ``phi[t, :t]`` and innovation variances ``v[t]``."""

    phi: np.ndarray
    v: np.ndarray
    n_points: int
    cov_tag: str = ""


@dataclass(frozen=True)
class PathBatch:
    paths: np.ndarray
    seed: int
    method_tag: str
    cov_tag: str

    @property
    def n_paths(self) -> int:
        return self.paths.shape[0]

    @property
    def k(self) -> int:
        return self.paths.shape[1]


def make_plan(cov: CovarianceSequence, k: int) -> DaviesHartePlan:
    if k < 2:
        raise ParameterError("Davies-Harte needs k >= 2")
    spectrum = circulant_spectrum(cov, k)
    return DaviesHartePlan(spectrum=spectrum, n_points=k, sqrt_g=np.sqrt(spectrum.g),
                           cov_tag=cov.describe())


def durbin_levinson_plan(cov: CovarianceSequence, k: int) -> DurbinLevinsonPlan:
    """
    Run the Durbin-Levinson recursion on lags ``0..k-1``.

    Row ``t`` of ``phi`` holds the coefficients predicting ``X_{t+1}`` from
    ``X_t, ..., X_1`` (most recent first) and ``v[t]`` the prediction variance.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    rho = cov.lags(k)
    phi = np.zeros((k, k))
    v = np.empty(k)
    v[0] = rho[0]
    for t in range(1, k):
        prev = phi[t - 1, : t - 1]
        partial = (rho[t] - np.dot(prev, rho[1:t][::-1])) / v[t - 1]
        phi[t, : t - 1] = prev - partial * prev[::-1]
        phi[t, t - 1] = partial
        v[t] = v[t - 1] * (1.0 - partial * partial)
        if v[t] <= 0.0:
            raise NotPositiveDefinite(
                f"Durbin-Levinson innovation variance {v[t]:.3e} at step {t} for {cov.describe()}"
            )
    return DurbinLevinsonPlan(phi=phi, v=v, n_points=k, cov_tag=cov.describe())


def _davies_harte_block(plan: DaviesHartePlan, n: int, stream: RandomStream) -> np.ndarray:
    M = plan.M
    half = M // 2
    z = sample_standard_normal(stream, (n, M))
    w = np.empty((n, M), dtype=complex)
    # Z_0 and Z_{M/2} real with variance 2, the rest complex with unit-variance parts
    w[:, 0] = np.sqrt(2.0) * z[:, 0]
    w[:, half] = np.sqrt(2.0) * z[:, 1]
    w[:, 1:half] = z[:, 2 : half + 1] + 1j * z[:, half + 1 :]
    w[:, half + 1 :] = np.conj(w[:, half - 1 : 0 : -1])
    w *= plan.sqrt_g
    x = fft(w)[:, : plan.n_points] / np.sqrt(2.0 * M)
    resid = np.max(np.abs(x.imag)) if x.size else 0.0
    if resid > IMAG_RESIDUE_TOL:
        raise AssertionError(f"Davies-Harte imaginary residue {resid:.3e}")
    return np.ascontiguousarray(x.real)


def _durbin_levinson_block(plan: DurbinLevinsonPlan, n: int, stream: RandomStream) -> np.ndarray:
    k = plan.n_points
    eps = sample_standard_normal(stream, (n, k))
    sd = np.sqrt(plan.v)
    x = np.empty((n, k))
    x[:, 0] = sd[0] * eps[:, 0]
    for t in range(1, k):
        # phi[t, j] multiplies X_{t-j}, i.e. column t-1-j
        x[:, t] = x[:, t - 1 :: -1] @ plan.phi[t, :t] + sd[t] * eps[:, t]
    return x


def iter_blocks(
    make_block: Callable[[int, RandomStream], np.ndarray],
    n_paths: int,
    stream: RandomStream,
    workers: int = 1,
) -> Iterator[np.ndarray]:
    """Yield path blocks in block order; blocks may be computed concurrently."""
    n_blocks = -(-n_paths // BLOCK_SIZE)

    def task(b: int) -> np.ndarray:
        size = min(BLOCK_SIZE, n_paths - b * BLOCK_SIZE)
        return make_block(size, stream.child(b))

    if workers <= 1 or n_blocks <= 1:
        for b in range(n_blocks):
            yield task(b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # bounded window keeps memory flat for large path counts
        window = 4 * workers
        for start in range(0, n_blocks, window):
            yield from pool.map(task, range(start, min(start + window, n_blocks)))


def block_sampler(
    cov: CovarianceSequence, k: int, method: str = "auto"
) -> tuple[Callable[[int, RandomStream], np.ndarray], str]:
    """Resolve ``method`` to a block generator and the tag of the method actually used."""
    if method not in METHODS:
        raise ParameterError(f"unknown sampling method {method!r}")
    if method in ("auto", "davies_harte") and k >= 2:
        try:
            plan = make_plan(cov, k)
        except (NotNonNegativeDefinite, ShapeError):
            if method == "davies_harte":
                raise
        else:
            return (lambda n, s: _davies_harte_block(plan, n, s)), "davies_harte"
    elif method == "davies_harte":
        raise ParameterError("Davies-Harte needs k >= 2")
    dl = durbin_levinson_plan(cov, k)
    return (lambda n, s: _durbin_levinson_block(dl, n, s)), "durbin_levinson"


def _collect(make_block, n_paths: int, stream: RandomStream, workers: int) -> np.ndarray:
    if n_paths < 1:
        raise ParameterError("n_paths must be >= 1")
    return np.concatenate(list(iter_blocks(make_block, n_paths, stream, workers)), axis=0)


def sample_davies_harte(plan: DaviesHartePlan, n_paths: int, stream: RandomStream,
                        workers: int = 1) -> PathBatch:
    paths = _collect(lambda n, s: _davies_harte_block(plan, n, s), n_paths, stream, workers)
    return PathBatch(paths, stream.master_seed, "davies_harte", plan.cov_tag)


def sample_durbin_levinson(cov: CovarianceSequence, k: int, n_paths: int, stream: RandomStream,
                           workers: int = 1) -> PathBatch:
    plan = durbin_levinson_plan(cov, k)
    paths = _collect(lambda n, s: _durbin_levinson_block(plan, n, s), n_paths, stream, workers)
    return PathBatch(paths, stream.master_seed, "durbin_levinson", cov.describe())


def sample_paths(cov: CovarianceSequence, k: int, n_paths: int, stream: RandomStream,
                 method: str = "auto", workers: int = 1) -> PathBatch:
    make_block, tag = block_sampler(cov, k, method)
    paths = _collect(make_block, n_paths, stream, workers)
    return PathBatch(paths, stream.master_seed, tag, cov.describe())


def write_paths_csv(batch: PathBatch, path) -> None:
    """One path per row, ``k`` comma-separated reals."""
    np.savetxt(path, batch.paths, delimiter=",", fmt="%.17g")


def write_paths_npy(batch: PathBatch, path) -> None:
    np.save(path, batch.paths)
