'''
################
The sequence space l1 of Fourier coefficients a_k, k in Z.

* A FourierVec stores the coefficients for |k| <= N; all others are zero.
* Convolution is the direct double sum with interval arithmetic.  The support
  grows to [-(Na+Nb), Na+Nb]; callers decide where to truncate.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

from dataclasses import dataclass

import numpy as np

import interval_core as ic
from interval_core import ComplexInterval, RealInterval


@dataclass(frozen=True)
class FourierVec:
    '''Coefficients a_{-N..N}, stored at array index k + N.'''
    coeffs: ComplexInterval

    def __post_init__(self):
        if self.coeffs.ndim != 1 or len(self.coeffs) % 2 != 1:
            raise ValueError("FourierVec needs an odd-length one-dimensional coefficient array")

    @property
    def N(self):
        return (len(self.coeffs) - 1) // 2

    @classmethod
    def zeros(cls, N):
        return cls(ComplexInterval.zeros((2 * N + 1,)))

    @classmethod
    def from_complex(cls, values):
        '''Point intervals from a complex array indexed k + N.'''
        return cls(ComplexInterval.from_complex(values))

    @classmethod
    def from_modes(cls, modes, N=None):
        '''
        Build from a mapping wavenumber -> value.  Values may be
        ComplexInterval, complex, or a (re_text, im_text) pair of decimal strings.
        '''
        if N is None:
            N = max((abs(k) for k in modes), default=0)
        coeffs = ComplexInterval.zeros((2 * N + 1,))
        for k, value in modes.items():
            if abs(k) > N:
                raise ValueError("Wavenumber %d is outside [-%d, %d]" % (k, N, N))
            if isinstance(value, tuple):
                value = ComplexInterval.from_decimal(*value)
            coeffs.set_at(k + N, ic.as_complex(value))
        return cls(coeffs)

    def coefficient(self, k):
        if abs(k) > self.N:
            return ComplexInterval.zeros()
        return self.coeffs[k + self.N]

    def pad(self, N):
        '''The same sequence stored with a larger maximum wavenumber.'''
        if N < self.N:
            raise ValueError("pad() cannot shrink the support; use project_split()")
        extra = N - self.N
        if extra == 0:
            return self
        zeros = ComplexInterval.zeros((extra,))
        return FourierVec(ComplexInterval.concatenate([zeros, self.coeffs, zeros]))

    def truncate(self, N):
        '''Drop the modes with |k| > N.'''
        if N >= self.N:
            return self.pad(N)
        return FourierVec(self.coeffs[self.N - N:self.N + N + 1])

    def mid(self):
        return self.coeffs.mid()

    def __add__(self, other):
        a, b = _common_support(self, other)
        return FourierVec(a.coeffs + b.coeffs)

    def __sub__(self, other):
        a, b = _common_support(self, other)
        return FourierVec(a.coeffs - b.coeffs)

    def scale(self, factor):
        return FourierVec(self.coeffs * factor)


def _common_support(a, b):
    N = max(a.N, b.N)
    return a.pad(N), b.pad(N)


@dataclass(frozen=True)
class TailSplit:
    '''finite holds the modes |k| <= m; tail_norm bounds sum_{|k|>m} |a_k|.'''
    finite: FourierVec
    tail_norm: RealInterval


def convolve_arrays(a, b):
    '''
    Full linear convolution of two ComplexInterval arrays of equal rank.
    Loops over the entries of b that are not exactly zero.
    '''
    out_shape = tuple(sa + sb - 1 for sa, sb in zip(a.shape, b.shape))
    result = ComplexInterval.zeros(out_shape)
    nonzero = np.argwhere(~b.is_exact_zero())
    for index in nonzero:
        index = tuple(index)
        target = tuple(slice(i, i + s) for i, s in zip(index, a.shape))
        result.add_at(target, a * b[index])
    return result


def convolve(a, b):
    '''(a*b)_k = sum_j a_{k-j} b_j, on the exact support [-(Na+Nb), Na+Nb].'''
    return FourierVec(convolve_arrays(a.coeffs, b.coeffs))


def ell1_norm(a):
    '''Enclosure of sum_k |a_k|.'''
    return a.coeffs.abs().sum()


def project_split(a, m):
    if m < 0:
        raise ValueError("Projection order must be non-negative")
    finite = a.truncate(m)
    if m >= a.N:
        return TailSplit(finite, RealInterval.zeros())
    inner = set(range(a.N - m, a.N + m + 1))
    outer = [i for i in range(len(a.coeffs)) if i not in inner]
    tail = a.coeffs.take(outer, axis=0)
    return TailSplit(finite, tail.abs().sum())


def strip_zero_mode(a):
    '''Zero the k = 0 coefficient and nothing else.'''
    coeffs = a.coeffs.copy()
    coeffs.set_at(a.N, ComplexInterval.zeros())
    return FourierVec(coeffs)


def laplacian_symbol(N, omega):
    '''The real interval array -k^2 omega^2 for k = -N..N.'''
    k_squared = np.arange(-N, N + 1, dtype=np.float64) ** 2
    return -(ic.as_real(k_squared) * omega.sqr())


def apply_laplacian(a, omega):
    '''(La)_k = -k^2 omega^2 a_k.'''
    return FourierVec(a.coeffs.scale(laplacian_symbol(a.N, omega)))
