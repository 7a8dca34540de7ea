'''
################
Real and complex interval arithmetic with outward rounding.

* Interval endpoints are numpy float64 arrays of any shape.  A scalar interval
  has shape ().  All operations are elementwise and broadcast like numpy.
* Directed rounding: each result is computed in round-to-nearest and then
  moved one float outward with numpy.nextafter.  Results that are exact by
  construction (adding an exact zero, multiplying by the point interval [0,0])
  are not moved.
* pi, cos, sin and exp enclosures come from mpmath's interval context and are
  converted to float64 with directed rounding.
* Complex intervals are rectangles re + i*im.
* Interval matrices are two-dimensional ComplexInterval values.

The module is called by every rigorous module of the package.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from mpmath import iv, libmp

from proof_errors import EnclosureError

# Working precision of the mpmath interval context, in bits
iv.prec = 96

# Below this bound on |x|*h, expm1_div switches to the series form
SERIES_CUTOFF = 0.25


def _down(x):
    return np.nextafter(x, -np.inf)


def _up(x):
    return np.nextafter(x, np.inf)


def _add_lo(x, y):
    s = x + y
    return np.where((x == 0) | (y == 0), s, _down(s))


def _add_hi(x, y):
    s = x + y
    return np.where((x == 0) | (y == 0), s, _up(s))


def sum_lower(values, axis=None):
    '''Lower bound of the sum: math.fsum is correctly rounded, then one step down.'''
    values = np.asarray(values, dtype=np.float64)
    if axis is None:
        values = values.reshape(-1)
        axis = 0
    if values.shape[axis] == 0:
        return np.zeros(np.delete(values.shape, axis))
    s = np.apply_along_axis(math.fsum, axis, values)
    return np.where(np.all(values == 0, axis=axis), s, _down(s))


def sum_upper(values, axis=None):
    values = np.asarray(values, dtype=np.float64)
    if axis is None:
        values = values.reshape(-1)
        axis = 0
    if values.shape[axis] == 0:
        return np.zeros(np.delete(values.shape, axis))
    s = np.apply_along_axis(math.fsum, axis, values)
    return np.where(np.all(values == 0, axis=axis), s, _up(s))


def _mul_endpoints(alo, ahi, blo, bhi):
    with np.errstate(invalid="ignore", over="ignore"):
        p1 = alo * blo
        p2 = alo * bhi
        p3 = ahi * blo
        p4 = ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    exact_zero = ((alo == 0) & (ahi == 0)) | ((blo == 0) & (bhi == 0))
    return np.where(exact_zero, 0.0, _down(lo)), np.where(exact_zero, 0.0, _up(hi))


def _mpi_to_floats(value):
    '''Directed conversion of an mpmath interval to a float64 pair.'''
    a, b = value._mpi_
    return (libmp.to_float(a, rnd=libmp.round_floor),
            libmp.to_float(b, rnd=libmp.round_ceiling))


class RealInterval:
    '''
    Closed real interval [lo, hi], elementwise over numpy arrays.

    Values are treated as immutable.  An interval whose endpoints are not
    finite is invalid; is_valid() reports it and callers turn it into a
    failure.
    '''

    __slots__ = ("lo", "hi")
    # Let numpy scalars and arrays defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, lo, hi=None):
        lo = np.asarray(lo, dtype=np.float64)
        hi = lo if hi is None else np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape:
            lo, hi = (np.array(v) for v in np.broadcast_arrays(lo, hi))
        if np.any(lo > hi):
            raise EnclosureError("Interval with lower endpoint above upper endpoint",
                                 {"lo": lo.tolist(), "hi": hi.tolist()})
        self.lo = lo
        self.hi = hi

    @classmethod
    def _make(cls, lo, hi):
        obj = object.__new__(cls)
        obj.lo = np.asarray(lo, dtype=np.float64)
        obj.hi = np.asarray(hi, dtype=np.float64)
        return obj

    # --- construction ---------------------------------------------------

    @classmethod
    def point(cls, value):
        return cls(value, value)

    @classmethod
    def zeros(cls, shape=()):
        return cls._make(np.zeros(shape), np.zeros(shape))

    @classmethod
    def from_decimal(cls, text):
        '''
        Enclose a decimal or rational string ("0.0025", "1/3", "-25").
        The enclosure is a point interval when the value is a float.
        '''
        exact = Fraction(str(text).strip())
        nearest = float(exact)
        if Fraction(nearest) == exact:
            return cls(nearest, nearest)
        if Fraction(nearest) < exact:
            return cls(nearest, math.nextafter(nearest, math.inf))
        return cls(math.nextafter(nearest, -math.inf), nearest)

    @classmethod
    def concatenate(cls, parts, axis=0):
        return cls._make(np.concatenate([p.lo for p in parts], axis=axis),
                         np.concatenate([p.hi for p in parts], axis=axis))

    # --- array protocol ---------------------------------------------------

    @property
    def shape(self):
        return self.lo.shape

    @property
    def ndim(self):
        return self.lo.ndim

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, index):
        return RealInterval._make(self.lo[index], self.hi[index])

    def reshape(self, *shape):
        return RealInterval._make(self.lo.reshape(*shape), self.hi.reshape(*shape))

    @property
    def T(self):
        return RealInterval._make(self.lo.T, self.hi.T)

    def copy(self):
        return RealInterval._make(self.lo.copy(), self.hi.copy())

    # --- arithmetic -------------------------------------------------------

    def __neg__(self):
        return RealInterval._make(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, ComplexInterval):
            return NotImplemented
        other = as_real(other)
        return RealInterval._make(_add_lo(self.lo, other.lo), _add_hi(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ComplexInterval):
            return NotImplemented
        other = as_real(other)
        return RealInterval._make(_add_lo(self.lo, -other.hi), _add_hi(self.hi, -other.lo))

    def __rsub__(self, other):
        if isinstance(other, ComplexInterval):
            return NotImplemented
        return as_real(other) - self

    def __mul__(self, other):
        if isinstance(other, ComplexInterval):
            return NotImplemented
        other = as_real(other)
        return RealInterval._make(*_mul_endpoints(self.lo, self.hi, other.lo, other.hi))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ComplexInterval):
            return NotImplemented
        other = as_real(other)
        if np.any((other.lo <= 0) & (other.hi >= 0)):
            raise EnclosureError("Division by an interval containing 0",
                                 {"divisor_lo": other.lo.tolist(), "divisor_hi": other.hi.tolist()})
        with np.errstate(over="ignore"):
            q1 = self.lo / other.lo
            q2 = self.lo / other.hi
            q3 = self.hi / other.lo
            q4 = self.hi / other.hi
        lo = np.minimum(np.minimum(q1, q2), np.minimum(q3, q4))
        hi = np.maximum(np.maximum(q1, q2), np.maximum(q3, q4))
        exact_zero = (self.lo == 0) & (self.hi == 0)
        return RealInterval._make(np.where(exact_zero, 0.0, _down(lo)),
                                  np.where(exact_zero, 0.0, _up(hi)))

    def __rtruediv__(self, other):
        return as_real(other) / self

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, np.integer)) or exponent < 0:
            raise TypeError("Only non-negative integer powers are supported")
        if exponent == 2:
            return self.sqr()
        result = RealInterval.point(np.ones(self.shape))
        for _ in range(exponent):
            result = result * self
        return result

    def sqr(self):
        mig, mag = self.mig(), self.mag()
        with np.errstate(over="ignore"):
            lo = mig * mig
            hi = mag * mag
        return RealInterval._make(np.where(mig == 0, 0.0, _down(lo)),
                                  np.where(mag == 0, 0.0, _up(hi)))

    def sqrt(self):
        if np.any(self.hi < 0):
            raise EnclosureError("Square root of a negative interval", {"hi": self.hi.tolist()})
        lo = np.sqrt(np.maximum(self.lo, 0.0))
        hi = np.sqrt(self.hi)
        return RealInterval._make(np.where(lo == 0, 0.0, _down(lo)),
                                  np.where(hi == 0, 0.0, _up(hi)))

    def exp(self):
        return exp_real_upper(self)

    def abs(self):
        return RealInterval._make(self.mig(), self.mag())

    def mag(self):
        '''Upper bound of |x| over the interval, as a float array.'''
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def mig(self):
        '''Lower bound of |x| over the interval, as a float array.'''
        straddles = (self.lo <= 0) & (self.hi >= 0)
        return np.where(straddles, 0.0, np.minimum(np.abs(self.lo), np.abs(self.hi)))

    def max_with(self, other):
        other = as_real(other)
        return RealInterval._make(np.maximum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def min_with(self, other):
        other = as_real(other)
        return RealInterval._make(np.minimum(self.lo, other.lo), np.minimum(self.hi, other.hi))

    def sum(self, axis=None):
        return RealInterval._make(sum_lower(self.lo, axis), sum_upper(self.hi, axis))

    def max(self, axis=None):
        return RealInterval._make(np.max(self.lo, axis=axis), np.max(self.hi, axis=axis))

    # --- queries ----------------------------------------------------------

    def mid(self):
        return 0.5 * self.lo + 0.5 * self.hi

    def width(self):
        return _up(self.hi - self.lo)

    def is_valid(self):
        return bool(np.all(np.isfinite(self.lo)) and np.all(np.isfinite(self.hi)))

    def contains(self, value):
        '''True where the interval contains value (a float, array, or interval).'''
        if isinstance(value, RealInterval):
            return (self.lo <= value.lo) & (value.hi <= self.hi)
        value = np.asarray(value, dtype=np.float64)
        return (self.lo <= value) & (value <= self.hi)

    def subset(self, other):
        return bool(np.all(as_real(other).contains(self)))

    def upper(self):
        '''Upper endpoint as a Python float (scalar intervals only).'''
        return float(self.hi)

    def lower(self):
        return float(self.lo)

    def __repr__(self):
        if self.shape == ():
            return "RealInterval([%r, %r])" % (float(self.lo), float(self.hi))
        return "RealInterval(shape=%s)" % (self.shape,)


def as_real(value):
    '''Promote a float, int or array to a point RealInterval.'''
    if isinstance(value, RealInterval):
        return value
    if isinstance(value, ComplexInterval):
        raise TypeError("Expected a real interval, got a complex interval")
    if isinstance(value, (str, Fraction)):
        return RealInterval.from_decimal(value)
    array = np.asarray(value, dtype=np.float64)
    return RealInterval._make(array, array)


class ComplexInterval:
    '''
    Rectangular complex interval re + i*im, elementwise over numpy arrays.
    '''

    __slots__ = ("re", "im")
    __array_ufunc__ = None

    def __init__(self, re, im=None):
        re = as_real(re)
        im = RealInterval.zeros(re.shape) if im is None else as_real(im)
        if re.shape != im.shape:
            raise EnclosureError("Real and imaginary parts have different shapes",
                                 {"re_shape": re.shape, "im_shape": im.shape})
        self.re = re
        self.im = im

    @classmethod
    def _make(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # --- construction ---------------------------------------------------

    @classmethod
    def zeros(cls, shape=()):
        return cls._make(RealInterval.zeros(shape), RealInterval.zeros(shape))

    @classmethod
    def from_complex(cls, values):
        '''Point intervals at the given complex floats.'''
        values = np.asarray(values, dtype=np.complex128)
        return cls._make(RealInterval.point(values.real.copy()),
                         RealInterval.point(values.imag.copy()))

    @classmethod
    def from_decimal(cls, re_text="0", im_text="0"):
        return cls._make(RealInterval.from_decimal(re_text), RealInterval.from_decimal(im_text))

    @classmethod
    def concatenate(cls, parts, axis=0):
        return cls._make(RealInterval.concatenate([p.re for p in parts], axis),
                         RealInterval.concatenate([p.im for p in parts], axis))

    @classmethod
    def stack(cls, parts, axis=0):
        return cls._make(
            RealInterval._make(np.stack([p.re.lo for p in parts], axis), np.stack([p.re.hi for p in parts], axis)),
            RealInterval._make(np.stack([p.im.lo for p in parts], axis), np.stack([p.im.hi for p in parts], axis)))

    # --- array protocol ---------------------------------------------------

    @property
    def shape(self):
        return self.re.shape

    @property
    def ndim(self):
        return self.re.ndim

    def __len__(self):
        return len(self.re)

    def __getitem__(self, index):
        return ComplexInterval._make(self.re[index], self.im[index])

    def reshape(self, *shape):
        return ComplexInterval._make(self.re.reshape(*shape), self.im.reshape(*shape))

    @property
    def T(self):
        return ComplexInterval._make(self.re.T, self.im.T)

    def copy(self):
        return ComplexInterval._make(self.re.copy(), self.im.copy())

    def take(self, indices, axis):
        return ComplexInterval._make(
            RealInterval._make(np.take(self.re.lo, indices, axis), np.take(self.re.hi, indices, axis)),
            RealInterval._make(np.take(self.im.lo, indices, axis), np.take(self.im.hi, indices, axis)))

    def set_at(self, index, value):
        '''Overwrite entries in place.  Only for arrays still under construction.'''
        value = as_complex(value)
        self.re.lo[index] = value.re.lo
        self.re.hi[index] = value.re.hi
        self.im.lo[index] = value.im.lo
        self.im.hi[index] = value.im.hi

    def add_at(self, index, value):
        '''Accumulate value into entries in place, with outward rounding.'''
        value = as_complex(value)
        for mine, theirs in ((self.re, value.re), (self.im, value.im)):
            mine.lo[index] = _add_lo(mine.lo[index], theirs.lo)
            mine.hi[index] = _add_hi(mine.hi[index], theirs.hi)

    # --- arithmetic -------------------------------------------------------

    def __neg__(self):
        return ComplexInterval._make(-self.re, -self.im)

    def __add__(self, other):
        other = as_complex(other)
        return ComplexInterval._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_complex(other)
        return ComplexInterval._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_complex(other) - self

    def __mul__(self, other):
        if isinstance(other, RealInterval):
            return self.scale(other)
        other = as_complex(other)
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return ComplexInterval._make(re, im)

    __rmul__ = __mul__

    def scale(self, factor):
        '''Multiply by a real interval.'''
        factor = as_real(factor)
        return ComplexInterval._make(self.re * factor, self.im * factor)

    def __truediv__(self, other):
        if isinstance(other, RealInterval):
            return ComplexInterval._make(self.re / other, self.im / other)
        other = as_complex(other)
        denominator = other.re.sqr() + other.im.sqr()
        numerator = self * other.conj()
        return ComplexInterval._make(numerator.re / denominator, numerator.im / denominator)

    def __rtruediv__(self, other):
        return as_complex(other) / self

    def conj(self):
        return ComplexInterval._make(self.re, -self.im)

    def abs_upper(self):
        '''Float array bounding |w| from above for every w in the rectangle.'''
        x, y = self.re.mag(), self.im.mag()
        with np.errstate(over="ignore"):
            s = _add_hi(np.where(x == 0, 0.0, _up(x * x)), np.where(y == 0, 0.0, _up(y * y)))
        r = np.sqrt(s)
        return np.where(r == 0, 0.0, _up(r))

    def abs_lower(self):
        x, y = self.re.mig(), self.im.mig()
        s = _add_lo(np.where(x == 0, 0.0, _down(x * x)), np.where(y == 0, 0.0, _down(y * y)))
        r = np.sqrt(np.maximum(s, 0.0))
        return np.where(r == 0, 0.0, np.maximum(_down(r), 0.0))

    def abs(self):
        return RealInterval._make(self.abs_lower(), self.abs_upper())

    def sum(self, axis=None):
        return ComplexInterval._make(self.re.sum(axis), self.im.sum(axis))

    # --- queries ----------------------------------------------------------

    def mid(self):
        return self.re.mid() + 1j * self.im.mid()

    def is_valid(self):
        return self.re.is_valid() and self.im.is_valid()

    def contains(self, value):
        if isinstance(value, ComplexInterval):
            return self.re.contains(value.re) & self.im.contains(value.im)
        value = np.asarray(value, dtype=np.complex128)
        return self.re.contains(value.real) & self.im.contains(value.imag)

    def subset(self, other):
        return bool(np.all(as_complex(other).contains(self)))

    def is_exact_zero(self):
        return ((self.re.lo == 0) & (self.re.hi == 0) & (self.im.lo == 0) & (self.im.hi == 0))

    def __repr__(self):
        if self.shape == ():
            return "ComplexInterval(re=[%r, %r], im=[%r, %r])" % (
                float(self.re.lo), float(self.re.hi), float(self.im.lo), float(self.im.hi))
        return "ComplexInterval(shape=%s)" % (self.shape,)


def as_complex(value):
    if isinstance(value, ComplexInterval):
        return value
    if isinstance(value, RealInterval):
        return ComplexInterval._make(value, RealInterval.zeros(value.shape))
    array = np.asarray(value)
    if np.iscomplexobj(array):
        return ComplexInterval.from_complex(array)
    return as_complex(as_real(array))


'''
##################
Interval matrices
##################
'''
# A dense complex-interval matrix is a two-dimensional ComplexInterval
IntervalMatrix = ComplexInterval


def identity(size):
    re = RealInterval.point(np.eye(size))
    return ComplexInterval._make(re, RealInterval.zeros((size, size)))


def matmul(a, b):
    '''Interval matrix product, one outer product per inner index.'''
    a, b = as_complex(a), as_complex(b)
    if a.shape[1] != b.shape[0]:
        raise EnclosureError("Matrix shapes do not align", {"left": a.shape, "right": b.shape})
    result = ComplexInterval.zeros((a.shape[0], b.shape[1]))
    for p in range(a.shape[1]):
        column = a[:, p:p + 1]
        if np.all(column.is_exact_zero()):
            continue
        result.add_at(slice(None), column * b[p:p + 1, :])
    return result


def norm1_upper(matrix):
    '''Enclosure of the induced l1 norm: the maximum column sum of |M|.'''
    matrix = as_complex(matrix)
    lower = np.max(sum_lower(matrix.abs_lower(), axis=0))
    upper = np.max(sum_upper(matrix.abs_upper(), axis=0))
    return RealInterval(lower, upper)


'''
##################
Transcendental enclosures
##################
'''


def _map_mpmath(function, x):
    x = as_real(x)
    lo = np.empty(x.shape)
    hi = np.empty(x.shape)
    for index in np.ndindex(x.shape):
        value = function(iv.mpf([float(x.lo[index]), float(x.hi[index])]))
        lo[index], hi[index] = _mpi_to_floats(value)
    return RealInterval._make(lo, hi)


def exp_real_upper(x):
    '''Outward enclosure of exp(x), elementwise.'''
    return _map_mpmath(iv.exp, x)


def _exp_quotient(x, h, order):
    '''
    Encloses sum_{j>=0} x^j h^(j+order) / (j+order)!, which is
    (e^{xh} - 1)/x for order 1 and (e^{xh} - 1 - xh)/x^2 for order 2.
    '''
    x, h = as_real(x), as_real(h)
    if x.shape != () or h.shape != ():
        raise ValueError("expm1_div works on scalar intervals")
    y_mag = float(_up(x.mag() * h.mag()))
    straddles = x.lo <= 0 <= x.hi
    if straddles or y_mag < SERIES_CUTOFF:
        terms = max(16, int(3 * y_mag) + 20)
        total = RealInterval.zeros()
        power = h ** order
        factorial = RealInterval.point(float(math.factorial(order)))
        for j in range(terms):
            total = total + power / factorial
            power = power * x * h
            factorial = factorial * (j + order + 1)
        # Geometric tail bound on the remaining terms
        ratio = as_real(y_mag) / (terms + order + 1)
        tail = (as_real(h.mag()) ** order) * (as_real(y_mag) ** terms) / factorial / (1 - ratio)
        return total + RealInterval(-tail.hi, tail.hi)
    quotient = (exp_real_upper(x * h) - 1) / x
    if order == 1:
        return quotient
    return (quotient - h) / x


def expm1_div(x, h):
    '''Enclosure of (e^{xh} - 1)/x, including the limit value h at x = 0.'''
    return _exp_quotient(x, h, 1)


def expm1_div2(x, h):
    '''Enclosure of (e^{xh} - 1 - xh)/x^2, including the limit value h^2/2 at x = 0.'''
    return _exp_quotient(x, h, 2)


@lru_cache(maxsize=None)
def pi_interval():
    return RealInterval(*_mpi_to_floats(+iv.pi))


def _theta_mp(theta_over_pi):
    fraction = Fraction(theta_over_pi)
    return iv.mpf(fraction.numerator) * iv.pi / fraction.denominator


@lru_cache(maxsize=None)
def theta_interval(theta_over_pi):
    '''Enclosure of theta = theta_over_pi * pi, for a rational theta_over_pi.'''
    return RealInterval(*_mpi_to_floats(_theta_mp(theta_over_pi)))


@lru_cache(maxsize=None)
def cos_interval(theta_over_pi):
    return RealInterval(*_mpi_to_floats(iv.cos(_theta_mp(theta_over_pi))))


@lru_cache(maxsize=None)
def cis_interval(theta_over_pi):
    '''Enclosure of e^{i theta} for theta = theta_over_pi * pi.'''
    theta = _theta_mp(theta_over_pi)
    return ComplexInterval._make(RealInterval(*_mpi_to_floats(iv.cos(theta))),
                                 RealInterval(*_mpi_to_floats(iv.sin(theta))))


@lru_cache(maxsize=None)
def omega_interval():
    '''The spatial frequency omega = 2*pi of the unit-periodic domain.'''
    return 2 * pi_interval()
