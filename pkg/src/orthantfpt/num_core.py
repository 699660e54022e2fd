"""
Scalar and array primitives shared by every estimator.

Normal density/CDF/quantile, a radix-2 FFT with the positive-exponent
convention used by the path sampler, seeded random streams with cheap
independent substreams, and Gauss-Hermite integration against the
standard normal density.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy import special

from .errors import ParameterError, ShapeError

INV_SQRT_2PI = 0.3989422804014327


def normal_pdf(x):
    return INV_SQRT_2PI * np.exp(-0.5 * np.square(x))


def normal_cdf(x):
    return special.ndtr(x)


def normal_quantile(p):
    """Inverse of :func:`normal_cdf` on the open interval (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise ParameterError("normal_quantile requires 0 < p < 1")
    return special.ndtri(p)


# ---------------------------------------------------------------- FFT

def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    if n <= 1:
        return 1
    return 1 << (int(n) - 1).bit_length()


_TWIDDLES: dict[tuple[int, bool], list[np.ndarray]] = {}
_BITREV: dict[int, np.ndarray] = {}


def _bit_reversal(n: int) -> np.ndarray:
    perm = _BITREV.get(n)
    if perm is None:
        bits = n.bit_length() - 1
        idx = np.arange(n)
        perm = np.zeros(n, dtype=np.intp)
        for b in range(bits):
            perm |= ((idx >> b) & 1) << (bits - 1 - b)
        _BITREV[n] = perm
    return perm


def _twiddles(n: int, inverse: bool) -> list[np.ndarray]:
    key = (n, inverse)
    tw = _TWIDDLES.get(key)
    if tw is None:
        sign = -1.0 if inverse else 1.0
        tw = []
        size = 2
        while size <= n:
            half = size // 2
            tw.append(np.exp(sign * 2j * np.pi * np.arange(half) / size))
            size *= 2
        _TWIDDLES[key] = tw
    return tw


def fft(x, inverse: bool = False) -> np.ndarray:
    """
    Radix-2 decimation-in-time DFT along the last axis.

    Forward: ``X[n] = sum_j x[j] exp(+2 pi i j n / L)`` with no scaling.
    Inverse: negative exponent and a ``1/L`` factor, so that
    ``fft(fft(x), inverse=True) == x``. Leading axes are treated as a
    batch of independent sequences.
    """
    a = np.asarray(x, dtype=complex)
    n = a.shape[-1]
    if n < 2 or not is_power_of_two(n):
        raise ShapeError(f"FFT length must be a power of two >= 2, got {n}")
    lead = a.shape[:-1]
    a = a[..., _bit_reversal(n)]
    b = np.empty_like(a)
    size = 2
    for w in _twiddles(n, inverse):
        half = size // 2
        src = a.reshape(lead + (n // size, size))
        dst = b.reshape(lead + (n // size, size))
        odd = src[..., half:] * w
        np.add(src[..., :half], odd, out=dst[..., :half])
        np.subtract(src[..., :half], odd, out=dst[..., half:])
        a, b = b, a
        size *= 2
    if inverse:
        a = a / n
    return a


# ------------------------------------------------------ random streams

@dataclass(frozen=True)
class RandomStream:
    """
    Reproducible stream of draws identified by ``(master_seed, key)``.

    ``key[0]`` is the stream id; :meth:`child` appends further indices to
    derive substreams. Draws come from a Philox generator seeded through
    ``numpy.random.SeedSequence`` so distinct keys give independent
    sequences. The object owns mutable generator state: do not share one
    instance between threads, hand out children instead.
    """

    master_seed: int
    stream_id: int = 0
    subkey: tuple[int, ...] = ()
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.stream_id < 0 or any(i < 0 for i in self.subkey):
            raise ParameterError("stream indices must be non-negative")
        seq = np.random.SeedSequence(
            entropy=int(self.master_seed) % 2**64,
            spawn_key=(int(self.stream_id),) + tuple(int(i) for i in self.subkey),
        )
        object.__setattr__(self, "_gen", np.random.Generator(np.random.Philox(seq)))

    def child(self, index: int) -> "RandomStream":
        return RandomStream(self.master_seed, self.stream_id, self.subkey + (int(index),))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


def sample_uniform(stream: RandomStream, n) -> np.ndarray:
    """Uniforms strictly inside (0, 1); ``n`` may be an int or a shape."""
    shape = (n,) if np.isscalar(n) else tuple(n)
    count = int(np.prod(shape))
    raw = stream.generator.bit_generator.random_raw(count)
    # 53 high bits, shifted by half an ulp so 0 and 1 are unreachable
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return u.reshape(shape)


def sample_standard_normal(stream: RandomStream, n) -> np.ndarray:
    """N(0, 1) draws by inversion: exactly one uniform per normal."""
    return special.ndtri(sample_uniform(stream, n))


# ---------------------------------------------------------- quadrature

def gauss_hermite_rule(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``z`` and weights ``w`` with ``sum(w * f(z)) ~ E f(Z)``, Z ~ N(0,1)."""
    if nodes < 2:
        raise ParameterError("Gauss-Hermite rule needs at least 2 nodes")
    x, w = hermgauss(nodes)
    return np.sqrt(2.0) * x, w / np.sqrt(np.pi)


def gauss_hermite_integrate(f: Callable[[np.ndarray], np.ndarray], nodes: int = 64) -> float:
    """Approximate the integral of ``f(z) * normal_pdf(z)`` over the real line."""
    z, w = gauss_hermite_rule(nodes)
    return float(np.dot(w, f(z)))
