"""
Slepian upper bounds on orthant probabilities.

Raising every off-diagonal correlation to the largest one, and every
threshold to the largest one, can only increase ``P(X_1 < S_1, ..., X_k < S_k)``.
The resulting exchangeable problem reduces to a one-dimensional integral;
with no positive correlation the independent case gives ``Phi(S_max)^k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceSequence
from .errors import DegenerateCorrelation, ParameterError
from .fpt import Boundary
from .num_core import gauss_hermite_integrate, normal_cdf

STABILITY_TOL = 1e-8


@dataclass(frozen=True)
class SlepianBound:
    k: int
    s_max: float
    rho_max: float
    value: float
    case_tag: str
    stable: bool = True


def exchangeable_orthant(s_max: float, rho: float, k: int, nodes: int = 64) -> float:
    """
    ``P(X_1 < s, ..., X_k < s)`` for unit-variance normals with common correlation ``rho``.

    Evaluates ``E[Phi((s + sqrt(rho) Z) / sqrt(1 - rho))^k]`` by Gauss-Hermite
    quadrature. Requires ``0 <= rho < 1``.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    if rho >= 1.0:
        raise DegenerateCorrelation(f"exchangeable bound needs rho < 1, got {rho}")
    if rho < 0.0:
        raise ParameterError("exchangeable representation needs rho >= 0")
    a = np.sqrt(rho)
    b = np.sqrt(1.0 - rho)
    return gauss_hermite_integrate(lambda z: normal_cdf((s_max + a * z) / b) ** k, nodes)


def slepian_bound(
    cov: CovarianceSequence, boundary: Boundary, k: int, quad_nodes: int = 64
) -> SlepianBound:
    """Upper bound on ``P_k`` using the horizon maxima over ``t = 1..k`` and lags ``1..k-1``."""
    if quad_nodes < 16:
        raise ParameterError("quad_nodes must be >= 16")
    if k < 1:
        raise ParameterError("k must be >= 1")
    s_max = float(np.max(boundary.values(k)))
    rho_max = float(np.max(cov.lags(k)[1:])) if k > 1 else -np.inf
    if rho_max >= 1.0:
        raise DegenerateCorrelation(f"maximal correlation {rho_max} makes the bound degenerate")
    if rho_max <= 0.0:
        return SlepianBound(k, s_max, rho_max, float(normal_cdf(s_max)) ** k, "independent")
    value = exchangeable_orthant(s_max, rho_max, k, quad_nodes)
    check = exchangeable_orthant(s_max, rho_max, k, 2 * quad_nodes)
    stable = abs(check - value) < STABILITY_TOL
    return SlepianBound(k, s_max, rho_max, min(max(value, 0.0), 1.0), "exchangeable", stable)


def bound_curve(cov: CovarianceSequence, boundary: Boundary, k_max: int,
                quad_nodes: int = 64) -> np.ndarray:
    """Bounds for ``k = 1..k_max`` indexed like ``SurvivalCurve.p_hat`` (entry 0 is 1)."""
    out = np.ones(k_max + 1)
    for k in range(1, k_max + 1):
        out[k] = slepian_bound(cov, boundary, k, quad_nodes).value
    return out
