import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import Phi, bivariate_orthant, binomial_sigma
from orthantfpt.bounds import bound_curve
from orthantfpt.covariance import arfima_covariance, load_tabulated_covariance
from orthantfpt.errors import FormatError, ParameterError
from orthantfpt.fpt import (
    CENSORED,
    Boundary,
    OrthantProblem,
    StartConditionWarning,
    SurvivalCurve,
    estimate_orthant_fpt,
    fairness_bound_check,
    first_crossing,
    first_crossings,
    read_boundary_file,
)
from orthantfpt.num_core import RandomStream

WHITE = load_tabulated_covariance([1.0] + [0.0] * 64)


def test_first_crossing_examples():
    assert first_crossing([2.0, 0.0, 0.0], Boundary.constant(1)) == 1
    assert first_crossing([-1.0] * 5, Boundary.constant(1)) == CENSORED
    # S_1 = 1.99 > 0.5, S_2 = 1.98 > 1.9, S_3 = 1.97 <= 2.5
    assert first_crossing([0.5, 1.9, 2.5], Boundary.linear(2, -0.01)) == 3
    # touching the boundary counts as a crossing
    assert first_crossing([0.0, 1.0], Boundary.constant(1)) == 2


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=30), st.floats(-2, 3))
def test_vectorized_crossing_matches_scalar(path, c):
    b = Boundary.constant(c)
    got = first_crossings(np.array([path]), b.values(len(path)))[0]
    assert got == first_crossing(path, b)


def test_boundary_parsing(tmp_path):
    assert Boundary.parse("const:1") == Boundary.constant(1.0)
    lin = Boundary.parse("lin:2,-0.01")
    np.testing.assert_allclose(lin.values(3), [1.99, 1.98, 1.97])
    f = tmp_path / "b.txt"
    f.write_text("# thresholds\n1.5\n1.0\n0.5\n")
    b = Boundary.parse(f"file:{f}")
    assert b.values(3).tolist() == [1.5, 1.0, 0.5]
    assert b.s0 == math.inf
    with pytest.raises(ParameterError):
        b.values(4)
    for bad in ("const", "const:x", "lin:1", "poly:1,2"):
        with pytest.raises(FormatError):
            Boundary.parse(bad)
    f.write_text("# nothing\n")
    with pytest.raises(FormatError):
        read_boundary_file(f)


def test_start_condition_warns():
    prob = OrthantProblem(WHITE, Boundary.constant(0.0), 2)
    with pytest.warns(StartConditionWarning):
        estimate_orthant_fpt(prob, 10, RandomStream(0), workers=1)


def test_white_noise_constant_boundary():
    n = 100_000
    curve = estimate_orthant_fpt(OrthantProblem(WHITE, Boundary.constant(1), 5), n,
                                 RandomStream(1), workers=1)
    target = Phi(1.0) ** 5
    assert abs(curve.p_hat[5] - target) <= 3 * binomial_sigma(target, n)


def test_independence_oracle_any_boundary():
    n = 50_000
    b = Boundary.linear(1.2, 0.02)
    curve = estimate_orthant_fpt(OrthantProblem(WHITE, b, 32), n, RandomStream(2), workers=1)
    target = np.concatenate(([1.0], np.cumprod([Phi(s) for s in b.values(32)])))
    sigma = np.sqrt(target * (1 - target) / n)
    assert np.all(np.abs(curve.p_hat - target) <= 3 * sigma + 1e-15)


@pytest.mark.parametrize("d", [0.2, 0.3, -0.2])
def test_two_dimensional_oracle(d):
    cov = arfima_covariance(d, 2)
    n = 100_000
    curve = estimate_orthant_fpt(OrthantProblem(cov, Boundary.constant(0.5), 2), n,
                                 RandomStream(3), workers=1)
    target = bivariate_orthant(0.5, 0.5, cov.rho[1])
    assert abs(curve.p_hat[2] - target) <= 3 * binomial_sigma(target, n)


def test_curve_structure_is_exact():
    prob = OrthantProblem(arfima_covariance(0.2, 40), Boundary.constant(1), 40)
    curve = estimate_orthant_fpt(prob, 30_000, RandomStream(4), workers=1)
    p = curve.p_hat
    assert p[0] == 1.0
    assert np.all(np.diff(p) <= 0)
    assert np.all((p >= 0) & (p <= 1))
    # P(T = k) = p_hat[k-1] - p_hat[k], exact in integer counts
    np.testing.assert_array_equal(np.round((p[:-1] - p[1:]) * curve.n_paths).astype(int),
                                  curve.crossings[1:])
    assert curve.crossings.sum() + curve.censored == curve.n_paths
    assert curve.censored == round(p[-1] * curve.n_paths)
    np.testing.assert_array_equal(p, 1 - np.cumsum(curve.crossings) / curve.n_paths)


def test_wilson_interval_contains_estimate():
    curve = SurvivalCurve(3, np.array([0, 10, 0, 90]), 0, 100)
    lo, hi = curve.wilson_interval()
    assert np.all(lo <= curve.p_hat) and np.all(curve.p_hat <= hi)
    assert hi[3] > 0.0  # Wilson stays informative at p_hat = 0
    assert curve.p_hat.tolist() == [1.0, 0.9, 0.9, 0.0]


def test_determinism_across_workers():
    prob = OrthantProblem(arfima_covariance(0.3, 40), Boundary.linear(2, -0.01), 40)
    runs = [estimate_orthant_fpt(prob, 20_000, RandomStream(5), workers=w) for w in (1, 2, 4)]
    for r in runs[1:]:
        np.testing.assert_array_equal(r.crossings, runs[0].crossings)
        np.testing.assert_array_equal(r.p_hat, runs[0].p_hat)


def test_fairness_check_passes_and_flags():
    cov = arfima_covariance(0.2, 20)
    b = Boundary.constant(1)
    curve = estimate_orthant_fpt(OrthantProblem(cov, b, 20), 20_000, RandomStream(6), workers=1)
    bounds = bound_curve(cov, b, 20)
    assert fairness_bound_check(curve, bounds).ok
    white = estimate_orthant_fpt(OrthantProblem(WHITE, b, 10), 20_000, RandomStream(7), workers=1)
    assert fairness_bound_check(white, Phi(1.0) ** np.arange(11)).ok

    crafted = SurvivalCurve(2, np.array([0, 0, 0]), 10**9, 10**9)
    report = fairness_bound_check(crafted, np.array([1.0, 0.5, 0.9]))
    assert report.violations == (1, 2)
    with pytest.raises(ParameterError):
        fairness_bound_check(crafted, np.ones(5))


def test_bounds_vanish_along_horizon():
    cov = arfima_covariance(0.2, 64)
    bounds = bound_curve(cov, Boundary.constant(1), 64)
    assert bounds[64] < bounds[32] < bounds[16]
    curve = estimate_orthant_fpt(OrthantProblem(cov, Boundary.constant(1), 64), 20_000,
                                 RandomStream(8), workers=1)
    assert curve.p_hat[64] < bounds[64]
