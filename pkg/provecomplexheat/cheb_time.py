'''
################
Chebyshev series in time with Fourier coefficients in space.

* A ChebFourier holds coefficients c[l, k] for l = 0..n-1 and k = -N..N on the
  time interval [t_lo, t_hi].  Its value is
      a_k(t) = c[0, k] + 2 * sum_{l>=1} c[l, k] T_l(tau),
  where tau maps [t_lo, t_hi] onto [-1, 1].  Every norm, product and
  evaluation in this module uses that storage convention.
* Products use the symmetric extension c[-l, k] = c[l, k].

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

from dataclasses import dataclass

import numpy as np

import interval_core as ic
from interval_core import ComplexInterval, RealInterval
from fourier_space import FourierVec, convolve_arrays
from proof_errors import DomainMismatchError

# Number of pieces used by the refined sup bound
SUP_REFINEMENT_PIECES = 8


@dataclass(frozen=True)
class ChebFourier:
    t_lo: float
    t_hi: float
    coeffs: ComplexInterval

    def __post_init__(self):
        if not self.t_lo < self.t_hi:
            raise DomainMismatchError("ChebFourier needs t_lo < t_hi",
                                      {"t_lo": self.t_lo, "t_hi": self.t_hi})
        if self.coeffs.ndim != 2 or self.coeffs.shape[1] % 2 != 1:
            raise ValueError("ChebFourier coefficients must have shape (n, 2N+1)")

    @property
    def n(self):
        return self.coeffs.shape[0]

    @property
    def N(self):
        return (self.coeffs.shape[1] - 1) // 2

    @classmethod
    def zeros(cls, t_lo, t_hi, n, N):
        return cls(t_lo, t_hi, ComplexInterval.zeros((n, 2 * N + 1)))

    @classmethod
    def from_complex(cls, t_lo, t_hi, values):
        return cls(float(t_lo), float(t_hi), ComplexInterval.from_complex(values))

    def step_length(self):
        '''Enclosure of h = t_hi - t_lo.'''
        return ic.as_real(self.t_hi) - self.t_lo

    def mid(self):
        return self.coeffs.mid()

    def truncate_modes(self, M):
        '''Keep the Fourier modes |k| <= M (padding with zeros if M > N).'''
        if M >= self.N:
            extra = M - self.N
            if extra == 0:
                return self
            zeros = ComplexInterval.zeros((self.n, extra))
            return ChebFourier(self.t_lo, self.t_hi,
                               ComplexInterval.concatenate([zeros, self.coeffs, zeros], axis=1))
        return ChebFourier(self.t_lo, self.t_hi, self.coeffs[:, self.N - M:self.N + M + 1])

    def same_interval(self, other):
        return self.t_lo == other.t_lo and self.t_hi == other.t_hi


@dataclass(frozen=True)
class WeightedNorm:
    '''value bounds sum_{l,k} |c[l,k]| nu^l.'''
    nu: RealInterval
    value: RealInterval


def chebyshev_weights(n, start=False):
    '''
    The float weights 1, 2, 2, ... (end of the interval) or 1, -2, 2, -2, ...
    (start of the interval) that turn stored coefficients into values.
    '''
    weights = np.full(n, 2.0)
    weights[0] = 1.0
    if start:
        weights[1::2] = -2.0
    return weights


def nu_powers(nu, count):
    '''RealInterval array nu^0, nu^1, ..., nu^(count-1).'''
    nu = ic.as_real(nu)
    lo = np.empty(count)
    hi = np.empty(count)
    power = ic.as_real(1.0)
    for l in range(count):
        lo[l], hi[l] = power.lo, power.hi
        power = power * nu
    return RealInterval(lo, hi)


def _symmetric_extension(coeffs):
    '''Rows l = -(n-1)..(n-1) holding c[|l|].'''
    n = coeffs.shape[0]
    order = list(range(n - 1, 0, -1)) + list(range(n))
    return coeffs.take(order, axis=0)


def cheb_convolve(a, b):
    '''
    Space-time product of two series on the same interval:
        (a*b)[l, k] = sum_{l1 in Z} sum_{k1} a[|l1|, k1] b[|l-l1|, k-k1].
    The result has Chebyshev order n_a + n_b - 1 and Fourier order N_a + N_b.
    '''
    if not a.same_interval(b):
        raise DomainMismatchError("cheb_convolve() operands live on different intervals",
                                  {"a": [a.t_lo, a.t_hi], "b": [b.t_lo, b.t_hi]})
    full_a = _symmetric_extension(a.coeffs)
    full_b = _symmetric_extension(b.coeffs)
    # Loop over the sparser operand
    if np.count_nonzero(~full_a.is_exact_zero()) < np.count_nonzero(~full_b.is_exact_zero()):
        full_a, full_b = full_b, full_a
    product = convolve_arrays(full_a, full_b)
    center = a.n + b.n - 2
    return ChebFourier(a.t_lo, a.t_hi, product[center:, :])


def strip_zero_mode(a):
    '''The series with every k = 0 coefficient set to exact zero.'''
    coeffs = a.coeffs.copy()
    coeffs.set_at((slice(None), a.N), ComplexInterval.zeros((a.n,)))
    return ChebFourier(a.t_lo, a.t_hi, coeffs)


def differentiate(a):
    '''
    Time derivative by the backward recursion on the doubled coefficients
    c'_{l-1} = c'_{l+1} + 2 l c_l, with the chain-rule factor 2/(t_hi - t_lo).
    '''
    n = a.n
    if n == 1:
        return ChebFourier.zeros(a.t_lo, a.t_hi, 1, a.N)
    doubled = a.coeffs.scale(2.0)
    rows = [None] * (n + 1)
    zero_row = ComplexInterval.zeros((a.coeffs.shape[1],))
    rows[n] = zero_row
    rows[n - 1] = zero_row
    for l in range(n - 1, 0, -1):
        rows[l - 1] = rows[l + 1] + doubled[l].scale(2.0 * l)
    derivative = ComplexInterval.stack(rows[:n - 1], axis=0)
    # Halving back to the storage convention and the chain-rule factor 2/h give 1/h
    factor = ic.as_real(1.0) / a.step_length()
    return ChebFourier(a.t_lo, a.t_hi, derivative.scale(factor))


def _evaluate_with_weights(a, weights):
    weighted = a.coeffs.scale(ic.as_real(weights[:, None]))
    return FourierVec(weighted.sum(axis=0))


def eval_at_start(a):
    '''a(t_lo): c[0] - 2 c[1] + 2 c[2] - ...'''
    return _evaluate_with_weights(a, chebyshev_weights(a.n, start=True))


def eval_at_end(a):
    '''a(t_hi): c[0] + 2 c[1] + 2 c[2] + ...'''
    return _evaluate_with_weights(a, chebyshev_weights(a.n))


def tau_of(a, t):
    '''Enclosure of the rescaled time tau(t) in [-1, 1].'''
    t = ic.as_real(t)
    tau = (2 * t - a.t_lo - a.t_hi) / a.step_length()
    # tau is in [-1, 1] for t in [t_lo, t_hi]
    return RealInterval(np.maximum(tau.lo, -1.0), np.minimum(tau.hi, 1.0))


def clenshaw(a, tau):
    '''Interval Clenshaw evaluation at a rescaled time tau (a RealInterval).'''
    tau = ic.as_real(tau)
    values = a.coeffs.scale(ic.as_real(chebyshev_weights(a.n)[:, None]))
    zero = ComplexInterval.zeros((a.coeffs.shape[1],))
    b_next, b_next2 = zero, zero
    for l in range(a.n - 1, 0, -1):
        b_next, b_next2 = values[l] + b_next.scale(2 * tau) - b_next2, b_next
    return FourierVec(values[0] + b_next.scale(tau) - b_next2)


def eval_at_time(a, t):
    return clenshaw(a, tau_of(a, t))


def coefficient_majorant(a):
    '''Per-mode enclosure of |c[0,k]| + 2 sum_{l>=1} |c[l,k]|.'''
    weights = ic.as_real(chebyshev_weights(a.n)[:, None])
    return (a.coeffs.abs() * weights).sum(axis=0)


def sup_abs_modes(a, refine=False, pieces=SUP_REFINEMENT_PIECES):
    '''
    Float upper bounds of sup_t |a_k(t)| for each mode.  With refine=True the
    coefficient majorant is compared with Clenshaw evaluation on pieces of
    [-1, 1] and the smaller bound is kept.
    '''
    bound = coefficient_majorant(a).hi
    if not refine:
        return bound
    edges = np.linspace(-1.0, 1.0, pieces + 1)
    refined = np.zeros_like(bound)
    for left, right in zip(edges[:-1], edges[1:]):
        piece = clenshaw(a, RealInterval(left, right))
        refined = np.maximum(refined, piece.coeffs.abs_upper())
    return np.minimum(bound, refined)


def sup_norm_X(a, refine=False):
    '''
    Upper bound of sup_t sum_k |a_k(t)|, from |T_l| <= 1.  The lower endpoint
    is the lower bound of the same majorant, not of the sup.
    '''
    majorant = coefficient_majorant(a).sum()
    if not refine:
        return majorant
    upper = float(ic.sum_upper(sup_abs_modes(a, refine=True)))
    upper = min(upper, majorant.upper())
    return RealInterval(min(majorant.lower(), upper), upper)


def weighted_norm(a, nu):
    '''||c||_nu = sum_{l,k} |c[l,k]| nu^l.'''
    nu = ic.as_real(nu)
    weights = nu_powers(nu, a.n)
    value = (a.coeffs.abs() * weights.reshape(a.n, 1)).sum()
    return WeightedNorm(nu, value)


'''
##################
Structured text records
##################
'''


def to_record(a):
    '''
    A dictionary ready for yaml.safe_dump.  Endpoints are repr() strings of the
    floats, which read back exactly.  Coefficients are listed in row-major
    (l, k) order as [l, k, re_lo, re_hi, im_lo, im_hi].
    '''
    rows = []
    c = a.coeffs
    for l in range(a.n):
        for j in range(c.shape[1]):
            rows.append([l, j - a.N,
                         repr(float(c.re.lo[l, j])), repr(float(c.re.hi[l, j])),
                         repr(float(c.im.lo[l, j])), repr(float(c.im.hi[l, j]))])
    return {"t_lo": repr(a.t_lo), "t_hi": repr(a.t_hi), "n": a.n, "N": a.N,
            "coefficients": rows}


def from_record(record):
    n, N = int(record["n"]), int(record["N"])
    shape = (n, 2 * N + 1)
    re_lo, re_hi, im_lo, im_hi = (np.zeros(shape) for _ in range(4))
    for l, k, a, b, c, d in record["coefficients"]:
        index = (int(l), int(k) + N)
        re_lo[index], re_hi[index] = float(a), float(b)
        im_lo[index], im_hi[index] = float(c), float(d)
    coeffs = ComplexInterval(RealInterval(re_lo, re_hi), RealInterval(im_lo, im_hi))
    return ChebFourier(float(record["t_lo"]), float(record["t_hi"]), coeffs)
