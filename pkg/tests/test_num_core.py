import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from oracles import Phi, direct_dft
from orthantfpt.errors import ParameterError, ShapeError
from orthantfpt.num_core import (
    RandomStream,
    fft,
    gauss_hermite_integrate,
    normal_cdf,
    normal_pdf,
    normal_quantile,
    sample_standard_normal,
    sample_uniform,
)

# mpmath at 40 digits
PHI_1 = 0.8413447460685429
PDF_1 = 0.24197072451914337
KS_SEED_12345 = 0.011875282472870285


def test_normal_pdf_values():
    assert normal_pdf(0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-16)
    assert normal_pdf(1.0) == pytest.approx(PDF_1, abs=1e-16)
    assert normal_pdf(-1.0) == normal_pdf(1.0)


def test_normal_cdf_values():
    assert normal_cdf(0.0) == 0.5
    assert abs(normal_cdf(1.0) - PHI_1) <= 1e-12
    assert normal_cdf(-np.inf) == 0.0
    assert normal_cdf(np.inf) == 1.0


@given(st.floats(-8, 8))
def test_cdf_symmetry(x):
    assert abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-12


@given(st.floats(-8, 8))
def test_cdf_matches_erfc(x):
    assert abs(normal_cdf(x) - Phi(x)) <= 1e-12


def test_normal_quantile_values():
    assert normal_quantile(0.5) == 0.0
    assert normal_quantile(PHI_1) == pytest.approx(1.0, abs=1e-10)
    for p in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ParameterError):
            normal_quantile(p)


def test_quantile_inverts_cdf():
    x = np.linspace(-6.0, 6.0, 2401)
    err = np.abs(normal_quantile(normal_cdf(x)) - x)
    assert err.max() <= 1e-9, f"worst x = {x[err.argmax()]}, error {err.max():.2e}"


@given(st.floats(-6, 5))
def test_quantile_inverts_cdf_below_upper_tail(x):
    assert abs(normal_quantile(normal_cdf(x)) - x) <= 1e-9


@given(st.floats(1e-12, 1 - 1e-12))
def test_cdf_inverts_quantile(p):
    assert abs(normal_cdf(normal_quantile(p)) - p) <= 1e-10


def test_quantile_strictly_increasing():
    p = np.linspace(1e-6, 1 - 1e-6, 10001)
    assert np.all(np.diff(normal_quantile(p)) > 0)


def test_fft_delta_and_constant():
    np.testing.assert_allclose(fft([1, 0, 0, 0]), [1, 1, 1, 1])
    np.testing.assert_allclose(fft([1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-15)


def test_fft_matches_direct_dft_and_round_trips():
    rng = np.random.default_rng(3)
    for L in (2, 4, 8, 64, 256):
        x = rng.normal(size=L) + 1j * rng.normal(size=L)
        np.testing.assert_allclose(fft(x), direct_dft(x, +1), rtol=0, atol=1e-10 * L)
        np.testing.assert_allclose(fft(x, inverse=True), direct_dft(x, -1) / L, atol=1e-10)
        back = fft(fft(x), inverse=True)
        assert np.max(np.abs(back - x)) <= 1e-10 * np.max(np.abs(x))


def test_fft_batches_along_last_axis():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(3, 5, 16))
    out = fft(x)
    for idx in np.ndindex(3, 5):
        np.testing.assert_allclose(out[idx], direct_dft(x[idx]), atol=1e-12)


def test_fft_of_even_sequence_is_real():
    rng = np.random.default_rng(5)
    half = rng.normal(size=17)
    even = np.concatenate((half, half[-2:0:-1]))
    assert np.max(np.abs(fft(even).imag)) <= 1e-10


@pytest.mark.parametrize("L", [0, 1, 3, 6, 12])
def test_fft_rejects_non_power_of_two(L):
    with pytest.raises(ShapeError):
        fft(np.ones(L))


def test_uniform_stream_contract():
    assert sample_uniform(RandomStream(1), 0).shape == (0,)
    u = sample_uniform(RandomStream(1), 100_000)
    assert np.all((u > 0) & (u < 1))
    assert abs(u.mean() - 0.5) <= 0.005
    np.testing.assert_array_equal(u, sample_uniform(RandomStream(1), 100_000))


def test_uniform_ks_regression():
    u = sample_uniform(RandomStream(12345), 10_000)
    ks = stats.kstest(u, "uniform").statistic
    assert ks <= 1.63 / math.sqrt(10_000)
    assert ks == pytest.approx(KS_SEED_12345, abs=1e-15)


def test_normal_stream_contract():
    assert sample_standard_normal(RandomStream(2), 0).shape == (0,)
    z = sample_standard_normal(RandomStream(2), 100_000)
    assert abs(z.mean()) <= 0.01
    assert abs(z.var() - 1.0) <= 0.02
    np.testing.assert_array_equal(z, sample_standard_normal(RandomStream(2), 100_000))


def test_stream_consumes_sequentially():
    s = RandomStream(9)
    a = sample_uniform(s, 10)
    b = sample_uniform(s, 10)
    np.testing.assert_array_equal(np.concatenate((a, b)), sample_uniform(RandomStream(9), 20))


def test_distinct_streams_are_uncorrelated():
    a = sample_standard_normal(RandomStream(5, 0), 50_000)
    b = sample_standard_normal(RandomStream(5, 1), 50_000)
    c = sample_standard_normal(RandomStream(5, 0).child(0), 50_000)
    d = sample_standard_normal(RandomStream(6, 0), 50_000)
    for x, y in ((a, b), (a, c), (a, d), (b, c)):
        assert abs(np.corrcoef(x, y)[0, 1]) <= 4 / math.sqrt(50_000)


def test_gauss_hermite_moments():
    assert gauss_hermite_integrate(lambda z: np.ones_like(z), 8) == pytest.approx(1.0, abs=1e-14)
    assert gauss_hermite_integrate(lambda z: z**2, 8) == pytest.approx(1.0, abs=1e-13)
    # exact for degree 2n - 1 = 7: E Z^6 = 15
    assert gauss_hermite_integrate(lambda z: z**6, 4) == pytest.approx(15.0, abs=1e-12)
    with pytest.raises(ParameterError):
        gauss_hermite_integrate(lambda z: z, 1)


def test_gauss_hermite_cdf_cubed_against_adaptive():
    ref, _ = integrate.quad(lambda z: Phi(z) ** 3 * math.exp(-z * z / 2) / math.sqrt(2 * math.pi),
                            -np.inf, np.inf, epsabs=1e-14)
    got = gauss_hermite_integrate(lambda z: normal_cdf(z) ** 3, 64)
    assert abs(got - ref) <= 1e-8
    assert abs(got - 0.25) <= 1e-8
