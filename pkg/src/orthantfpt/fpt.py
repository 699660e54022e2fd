"""
Orthant probabilities from first passage times.

With ``T = min{t >= 1 : X_t >= S_t}``, the orthant probability
``P(X_1 < S_1, ..., X_k < S_k)`` equals ``P(T > k)``. Simulating paths of
length ``k_max`` and tallying their first crossings therefore yields the whole
curve ``k -> P_k`` for ``k = 1..k_max`` from a single batch.
"""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .covariance import CovarianceSequence
from .errors import FormatError, ParameterError
from .num_core import RandomStream
from .path_sim import block_sampler, default_workers, iter_blocks

Z99 = 2.5758293035489004
CENSORED = 0


class StartConditionWarning(UserWarning):
    """The boundary does not start strictly above the initial value X_0 = 0."""


@dataclass(frozen=True)
class Boundary:
    """
    Absorbing threshold sequence ``S_t``.

    ``kind`` is ``"constant"`` (params ``(c,)``), ``"linear"`` (``(a, b)``,
    ``S_t = a + b t``) or ``"tabulated"`` (``S_1, S_2, ...``; ``S_0 = +inf``).
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        expected = {"constant": 1, "linear": 2}
        if self.kind in expected:
            if len(self.params) != expected[self.kind]:
                raise ParameterError(f"{self.kind} boundary takes {expected[self.kind]} parameters")
        elif self.kind == "tabulated":
            if len(self.params) == 0:
                raise ParameterError("tabulated boundary is empty")
        else:
            raise ParameterError(f"unknown boundary kind {self.kind!r}")
        if not np.all(np.isfinite(self.params)):
            raise ParameterError("boundary parameters must be finite")

    @classmethod
    def constant(cls, c: float) -> "Boundary":
        return cls("constant", (float(c),))

    @classmethod
    def linear(cls, a: float, b: float) -> "Boundary":
        return cls("linear", (float(a), float(b)))

    @classmethod
    def tabulated(cls, values) -> "Boundary":
        return cls("tabulated", tuple(float(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> "Boundary":
        """Parse ``const:<c>``, ``lin:<a>,<b>`` or ``file:<path>``."""
        kind, sep, arg = text.partition(":")
        if not sep:
            raise FormatError(f"boundary spec {text!r} lacks a ':'")
        try:
            if kind == "const":
                return cls.constant(float(arg))
            if kind == "lin":
                a, b = arg.split(",")
                return cls.linear(float(a), float(b))
        except ValueError:
            raise FormatError(f"cannot parse boundary spec {text!r}") from None
        if kind == "file":
            return read_boundary_file(arg)
        raise FormatError(f"unknown boundary kind in {text!r}")

    @property
    def s0(self) -> float:
        if self.kind == "tabulated":
            return np.inf
        return self.params[0]

    def values(self, k: int) -> np.ndarray:
        """``S_1, ..., S_k`` as an array of length ``k``."""
        t = np.arange(1, k + 1, dtype=float)
        if self.kind == "constant":
            return np.full(k, self.params[0])
        if self.kind == "linear":
            a, b = self.params
            return a + b * t
        if k > len(self.params):
            raise ParameterError(f"tabulated boundary has {len(self.params)} values, {k} requested")
        return np.asarray(self.params[:k])

    def describe(self) -> str:
        if self.kind == "constant":
            return f"const:{self.params[0]:g}"
        if self.kind == "linear":
            return f"lin:{self.params[0]:g},{self.params[1]:g}"
        return f"tabulated[{len(self.params)}]"


def read_boundary_file(path) -> Boundary:
    """One threshold per line starting at ``t = 1``; '#' lines are ignored."""
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise FormatError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not values:
        raise FormatError(f"{path}: no boundary values")
    return Boundary.tabulated(values)


@dataclass(frozen=True)
class OrthantProblem:
    cov: CovarianceSequence
    boundary: Boundary
    k_max: int

    def __post_init__(self):
        if self.k_max < 1:
            raise ParameterError("k_max must be >= 1")

    def thresholds(self, k: int | None = None) -> np.ndarray:
        return self.boundary.values(self.k_max if k is None else k)


@dataclass
class SurvivalCurve:
    """
    Survival estimates indexed by ``k``: ``p_hat[0] = 1`` and ``p_hat[k]``
    estimates ``P_k`` for ``k = 1..k_max``. ``crossings[k]`` counts paths
    with ``T = k``; ``crossings[0]`` is unused and kept at zero.
    """

    k_max: int
    crossings: np.ndarray
    censored: int
    n_paths: int
    elapsed_seconds: float = 0.0
    method_tag: str = ""
    p_hat: np.ndarray = field(init=False)

    def __post_init__(self):
        cum = np.cumsum(self.crossings)
        self.p_hat = 1.0 - cum / self.n_paths

    @property
    def stderr(self) -> np.ndarray:
        p = self.p_hat
        return np.sqrt(p * (1.0 - p) / self.n_paths)

    def wilson_interval(self, z: float = Z99) -> tuple[np.ndarray, np.ndarray]:
        n = self.n_paths
        p = self.p_hat
        denom = 1.0 + z * z / n
        centre = (p + z * z / (2 * n)) / denom
        half = z * np.sqrt(p * (1.0 - p) / n + z * z / (4 * n * n)) / denom
        return np.clip(centre - half, 0.0, 1.0), np.clip(centre + half, 0.0, 1.0)


def first_crossing(path, boundary: Boundary) -> int:
    """Smallest ``t`` (1-based) with ``path[t] >= S_t``, or ``CENSORED`` (0)."""
    x = np.asarray(path, dtype=float)
    hits = np.flatnonzero(x >= boundary.values(len(x)))
    return int(hits[0]) + 1 if hits.size else CENSORED


def first_crossings(paths: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Vectorized :func:`first_crossing` over the rows of ``paths``."""
    crossed = paths >= thresholds
    t = np.argmax(crossed, axis=1) + 1
    t[~crossed.any(axis=1)] = CENSORED
    return t


def check_start_condition(boundary: Boundary) -> None:
    if not boundary.s0 > 0.0:
        warnings.warn(
            f"boundary {boundary.describe()} has S_0 = {boundary.s0:g} <= X_0 = 0; "
            "t = 0 is never counted as a crossing",
            StartConditionWarning,
            stacklevel=3,
        )


def tally_crossings(times: np.ndarray, k_max: int) -> tuple[np.ndarray, int]:
    hist = np.bincount(times, minlength=k_max + 1).astype(np.int64)
    censored = int(hist[CENSORED])
    hist[CENSORED] = 0
    return hist, censored


def estimate_orthant_fpt(
    problem: OrthantProblem,
    n_paths: int,
    stream: RandomStream,
    method: str = "auto",
    workers: int | None = None,
) -> SurvivalCurve:
    """Estimate ``P_k`` for every ``k <= k_max`` from ``n_paths`` simulated paths."""
    if n_paths < 1:
        raise ParameterError("n_paths must be >= 1")
    check_start_condition(problem.boundary)
    workers = default_workers() if workers is None else workers
    thresholds = problem.thresholds()
    start = time.perf_counter()
    make_block, tag = block_sampler(problem.cov, problem.k_max, method)
    hist = np.zeros(problem.k_max + 1, dtype=np.int64)
    censored = 0
    for block in iter_blocks(make_block, n_paths, stream, workers):
        h, c = tally_crossings(first_crossings(block, thresholds), problem.k_max)
        hist += h
        censored += c
    elapsed = time.perf_counter() - start
    return SurvivalCurve(problem.k_max, hist, censored, n_paths, elapsed, tag)


@dataclass(frozen=True)
class FairnessReport:
    violations: tuple[int, ...]
    margin: np.ndarray

    @property
    def ok(self) -> bool:
        return not self.violations


def fairness_bound_check(curve: SurvivalCurve, bounds, n_sigma: float = 3.0) -> FairnessReport:
    """
    Flag every ``k`` where ``p_hat[k] - n_sigma * stderr[k]`` exceeds the upper bound.

    ``bounds`` is indexed like ``curve.p_hat`` (entry 0 ignored); NaN entries
    are skipped.
    """
    b = np.asarray(bounds, dtype=float)
    if b.shape != curve.p_hat.shape:
        raise ParameterError("bounds must have length k_max + 1")
    margin = curve.p_hat - n_sigma * curve.stderr - b
    margin[0] = -np.inf
    bad = np.flatnonzero(np.nan_to_num(margin, nan=-np.inf) > 0.0)
    return FairnessReport(tuple(int(k) for k in bad), margin)
