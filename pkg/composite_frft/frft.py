"""
Discrete and fractional Fourier transforms.

The fractional Fourier transform of an L-long sequence is

    G[k+s] = sum_j x[j] * exp(-2i * pi * j * (k+s) * alpha),   0 <= k < L

for an arbitrary, possibly complex, parameter ``alpha`` and a fractional
output shift ``0 <= s < 1``. With ``2j(k+s) = j**2 + (k+s)**2 - (k+s-j)**2``
the sum becomes a convolution of the chirped input with a chirp, which is
evaluated as a circular convolution of length ``2L`` through the DFT::

    G[k+s] = exp(-i*pi*(k+s)**2*alpha) * IDFT(DFT(y) * DFT(z))[k]

    y[j] = x[j] * exp(-i*pi*j**2*alpha)              0 <= j < L
    y[j] = 0                                         L <= j < 2L
    z[j] = exp(i*pi*(j+s)**2*alpha)                  0 <= j < L
    z[j] = exp(i*pi*(j+s-2L)**2*alpha)               L <= j < 2L

The DFT itself is a radix-2 FFT for power-of-two lengths and Bluestein's
algorithm for every other length, so the convolution length never has to
be rounded up. The nominal cost of the transform is ``20 L log2(L) + 44 L``
operations; Bluestein lengths change the constants.

All transforms act on the last axis, so a batch of sequences can be passed
as an array of shape ``(..., L)``.
"""

import logging
from functools import lru_cache

import numpy as np
from attr import attrs, attrib

from .exceptions import PlanError

logger = logging.getLogger(__name__)

#: Largest deviation from unit modulus tolerated in the chirps of a real parameter.
UNIT_MODULUS_TOLERANCE = 1e-12


def _as_sequence(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim < 1 or x.shape[-1] < 1:
        raise PlanError('Expected a sequence of length >= 1, got shape %s' % (x.shape,))
    return x


def _is_power_of_two(n):
    return n & (n - 1) == 0


@lru_cache(maxsize=None)
def _bit_reversal(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.flags.writeable = False
    return rev


@lru_cache(maxsize=None)
def _twiddles(size, sign):
    tw = np.exp(sign * 2j * np.pi * np.arange(size // 2) / size)
    tw.flags.writeable = False
    return tw


def _fft_pow2(x, sign):
    n = x.shape[-1]
    if n == 1:
        return x.copy()

    lead = x.shape[:-1]
    x = x[..., _bit_reversal(n)]
    size = 2
    while size <= n:
        half = size // 2
        blocks = x.reshape(lead + (n // size, size))
        even = blocks[..., :half]
        odd = blocks[..., half:] * _twiddles(size, sign)
        x = np.concatenate((even + odd, even - odd), axis=-1).reshape(lead + (n,))
        size *= 2
    return x


@lru_cache(maxsize=64)
def _bluestein_kernel(n, sign):
    m = 1 << (2 * n - 2).bit_length()
    k = np.arange(n)
    # k**2 mod 2n bounds the chirp phase
    chirp = np.exp(sign * 1j * np.pi * ((k * k) % (2 * n)) / n)

    kernel = np.zeros(m, dtype=complex)
    kernel[:n] = np.conj(chirp)
    kernel[m - n + 1:] = np.conj(chirp[1:][::-1])
    kernel_hat = _fft_pow2(kernel, -1)

    chirp.flags.writeable = False
    kernel_hat.flags.writeable = False
    return chirp, kernel_hat


def _bluestein(x, sign):
    n = x.shape[-1]
    chirp, kernel_hat = _bluestein_kernel(n, sign)
    m = kernel_hat.shape[-1]

    padded = np.zeros(x.shape[:-1] + (m,), dtype=complex)
    padded[..., :n] = x * chirp
    conv = _fft_pow2(_fft_pow2(padded, -1) * kernel_hat, +1) / m
    return conv[..., :n] * chirp


def _transform(x, sign):
    if _is_power_of_two(x.shape[-1]):
        return _fft_pow2(x, sign)
    return _bluestein(x, sign)


def dft(x):
    """ ``X[k] = sum_j x[j] exp(-2i pi jk/L)`` along the last axis, for any L >= 1. """
    return _transform(_as_sequence(x), -1)


def idft(x):
    """ Inverse of :func:`dft`, normalised by ``1/L``. """
    x = _as_sequence(x)
    return _transform(x, +1) / x.shape[-1]


def dft_direct(x):
    """ Quadratic-time DFT used as a reference. """
    x = _as_sequence(x)
    n = x.shape[-1]
    k = np.arange(n)
    return x @ np.exp(-2j * np.pi * ((np.outer(k, k)) % n) / n)


@attrs(frozen=True)
class FrftPlan(object):
    """
    Precomputed chirps of the fast fractional Fourier transform for a
    fixed ``(length, alpha, shift)``. A plan is immutable and can be
    executed on any number of inputs, also from several threads.
    """
    #: Length L of the transformed sequences.
    length = attrib(type=int)
    #: Transform parameter; may be complex.
    alpha = attrib(type=complex)
    #: Fractional output shift s, 0 <= s < 1.
    shift = attrib(type=float)
    #: Length of the circular convolution, at least 2L.
    padded_length = attrib(type=int)
    #: exp(-i pi j^2 alpha), 0 <= j < L.
    y_chirp = attrib(type=np.ndarray, repr=False, eq=False)
    #: Two-piece chirp of length padded_length.
    z_chirp = attrib(type=np.ndarray, repr=False, eq=False)
    #: DFT of z_chirp.
    z_spectrum = attrib(type=np.ndarray, repr=False, eq=False)
    #: exp(-i pi (k+s)^2 alpha), 0 <= k < L.
    out_chirp = attrib(type=np.ndarray, repr=False, eq=False)

    @classmethod
    def build(cls, length, alpha, shift=0.0, padded_length=None):
        length = int(length)
        alpha = complex(alpha)
        shift = float(shift)

        if length < 1:
            raise PlanError('Sequence length must be at least 1, got %d' % length)
        if not 0.0 <= shift < 1.0:
            raise PlanError('Fractional shift must lie in [0, 1), got %r' % shift)
        if padded_length is None:
            padded_length = 2 * length
        elif padded_length < 2 * length:
            raise PlanError('Padded length must be at least %d, got %d' % (2 * length, padded_length))

        j = np.arange(length)
        y_chirp = np.exp(-1j * np.pi * alpha * (j * j))
        out_chirp = np.exp(-1j * np.pi * alpha * (j + shift) ** 2)

        z_chirp = np.zeros(padded_length, dtype=complex)
        z_chirp[:length] = np.exp(1j * np.pi * alpha * (j + shift) ** 2)
        upper = np.arange(padded_length - length, padded_length)
        z_chirp[padded_length - length:] = np.exp(1j * np.pi * alpha * (upper + shift - padded_length) ** 2)

        for arr in (y_chirp, z_chirp, out_chirp):
            arr.flags.writeable = False
        z_spectrum = dft(z_chirp)
        z_spectrum.flags.writeable = False

        return cls(length, alpha, shift, padded_length, y_chirp, z_chirp, z_spectrum, out_chirp)

    def __attrs_post_init__(self):
        if self.alpha.imag == 0.0:
            deviation = max(
                np.max(np.abs(np.abs(self.y_chirp) - 1.0)),
                np.max(np.abs(np.abs(self.out_chirp) - 1.0)),
            )
            if deviation > UNIT_MODULUS_TOLERANCE:
                raise PlanError('Chirp modulus deviates from 1 by %g' % deviation)

    def execute(self, x):
        """ Transform ``x`` of shape ``(..., L)`` along its last axis. """
        x = _as_sequence(x)
        if x.shape[-1] != self.length:
            raise PlanError('Plan is for length %d, got %d' % (self.length, x.shape[-1]))

        y = np.zeros(x.shape[:-1] + (self.padded_length,), dtype=complex)
        y[..., :self.length] = x * self.y_chirp
        conv = idft(dft(y) * self.z_spectrum)
        return conv[..., :self.length] * self.out_chirp


@lru_cache(maxsize=128)
def _cached_plan(length, alpha, shift, padded_length):
    return FrftPlan.build(length, alpha, shift, padded_length)


def plan(length, alpha, shift=0.0, padded_length=None):
    """ Build or reuse a :class:`FrftPlan`. """
    return _cached_plan(int(length), complex(alpha), float(shift), padded_length)


def frft_direct(x, alpha, s=0.0):
    """ Quadratic-time fractional Fourier transform, the reference for :func:`frft_fast`. """
    x = _as_sequence(x)
    if not 0.0 <= s < 1.0:
        raise PlanError('Fractional shift must lie in [0, 1), got %r' % s)

    n = x.shape[-1]
    j = np.arange(n)
    kernel = np.exp(-2j * np.pi * complex(alpha) * np.outer(j, j + s))
    return x @ kernel


def frft_fast(x, alpha, s=0.0, padded_length=None):
    x = _as_sequence(x)
    return plan(x.shape[-1], alpha, s, padded_length).execute(x)
