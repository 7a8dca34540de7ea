'''
################
Closed-form bounds for the evolution operator U(t,s) of the linearized
problem on one step.

* The tail (|k| > m) evolution is bounded by
      W_tail(t,s) = exp(-mu (t-s) + 2 int_s^t ||abar||) <= exp(x (t-s)),
  with mu = (m+1)^2 omega^2 cos(theta) and x = 2 ||abar||_X - mu.
* From the upper end x_hi of x and h come W_inf = (e^{xh}-1)/x,
  Wbar_inf = (W_inf - h)/x, W_sup = max(1, e^{xh}) and W_end = e^{xh}, the
  bound of W_tail(t_hi, t_lo).  All four increase with x.
* W_m (module variational) and these constants give kappa and the uniform
  bound W_h on ||U(t,s)||.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
from dataclasses import dataclass, field

import numpy as np

import interval_core as ic
from interval_core import RealInterval
import cheb_time as cheb
from proof_errors import ConfigError, TailCouplingFailure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TailConstants:
    mu: RealInterval
    growth_rate: RealInterval
    W_inf: RealInterval
    W_inf_bar: RealInterval
    W_sup: RealInterval
    W_end: RealInterval
    kappa: RealInterval
    abar_norm: RealInterval
    abar_s_norm: RealInterval
    h: RealInterval


@dataclass(frozen=True)
class EvolutionBound:
    '''W_h and the entries [[e11, e12], [e21, e22]] of its block matrix.'''
    W_h: RealInterval
    entries: tuple


def block_norm1(e11, e12, e21, e22):
    '''l1 norm of a 2x2 matrix with nonnegative entries: the larger column sum.'''
    return (e11 + e21).max_with(e12 + e22)


def mu_interval(m, theta_over_pi):
    '''mu_{m+1} = (m+1)^2 omega^2 cos(theta).  Requires cos(theta) > 0 rigorously.'''
    cos_theta = ic.cos_interval(theta_over_pi)
    if not cos_theta.lower() > 0:
        raise ConfigError("cos(theta) must be positive: |theta| < pi/2 is required",
                          {"theta_over_pi": str(theta_over_pi)})
    return ic.as_real(float((m + 1) ** 2)) * ic.omega_interval().sqr() * cos_theta


def kappa_value(W_m, W_inf_bar, abar_s_norm):
    return 1 - 4 * ic.as_real(W_m) * W_inf_bar * ic.as_real(abar_s_norm).sqr()


def growth_rate_bound(norm_bound, mu):
    '''The point interval at the rounded-up upper end of 2 ||abar||_X - mu.'''
    return RealInterval.point((2 * ic.as_real(norm_bound) - mu).upper())


def tail_constants(abar, m, theta_over_pi, W_m, refine=False):
    '''
    All tail constants for the step of abar.  Raises TailCouplingFailure when
    kappa does not have a positive lower bound.
    '''
    h = abar.step_length()
    mu = mu_interval(m, theta_over_pi)
    computed_norm = cheb.sup_norm_X(abar, refine=refine)
    computed_s_norm = cheb.sup_norm_X(cheb.strip_zero_mode(abar), refine=refine)
    # Only upper endpoints of the norms are rigorous bounds
    norm_bound = RealInterval(0.0, computed_norm.upper())
    s_norm_bound = RealInterval(0.0, computed_s_norm.upper())
    x_hi = growth_rate_bound(norm_bound, mu)
    # W_inf, Wbar_inf and e^{xh} increase with x: evaluate at the point x_hi
    W_inf = ic.expm1_div(x_hi, h)
    W_inf_bar = ic.expm1_div2(x_hi, h)
    W_end = ic.exp_real_upper(x_hi * h)
    W_sup = W_end.max_with(1.0)
    kappa = kappa_value(W_m, W_inf_bar, s_norm_bound)
    tc = TailConstants(mu, x_hi, W_inf, W_inf_bar, W_sup, W_end, kappa, norm_bound, s_norm_bound, h)
    if not kappa.lower() > 0:
        logger.warning("kappa lower bound %.6g is not positive (m=%d)", kappa.lower(), m)
        raise TailCouplingFailure("kappa does not have a positive lower bound",
                                  {"kappa_lo": kappa.lower(), "W_m": ic.as_real(W_m).upper(),
                                   "W_inf_bar": W_inf_bar.upper(),
                                   "abar_s_norm": s_norm_bound.upper(), "m": m})
    return tc


def assemble_Wh(W_m, tc):
    if not tc.kappa.lower() > 0:
        raise TailCouplingFailure("assemble_Wh() needs kappa > 0", {"kappa_lo": tc.kappa.lower()})
    W_m = ic.as_real(W_m)
    inv_kappa = 1 / tc.kappa
    s = tc.abar_s_norm
    e11 = W_m * inv_kappa
    e12 = 2 * W_m * tc.W_inf * s * inv_kappa
    e21 = e12
    e22 = tc.W_sup + 4 * W_m * tc.W_inf.sqr() * s.sqr() * inv_kappa
    return EvolutionBound(block_norm1(e11, e12, e21, e22), ((e11, e12), (e21, e22)))


'''
##################
Quadrature check of the tail inequalities
##################
'''


@dataclass
class LemmaReport:
    samples: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations


def _midpoint_enclosure(values_at_midpoints, width, remainder):
    '''Composite midpoint sum plus the remainder interval.'''
    return values_at_midpoints.sum() * width + remainder


def _tail_integral(x, length, pieces):
    '''Enclosure of int_0^length e^{x u} du by the composite midpoint rule.'''
    if length == 0.0:
        return RealInterval.zeros()
    width = ic.as_real(length) / pieces
    mids = (ic.as_real(np.arange(pieces) + 0.5)) * width
    values = ic.exp_real_upper(mids * x)
    # The integrand is convex: the midpoint rule is low by at most length*width^2/24*max|g''|
    peak = ic.exp_real_upper(x * length).max_with(1.0)
    error = ic.as_real(length) * width.sqr() / 24 * x.sqr() * peak
    return _midpoint_enclosure(values, width, RealInterval(0.0, error.upper()))


def _double_integral(x, length, pieces):
    '''Enclosure of int_0^length (e^{x u} - 1)/x du, the inner integral done in closed form.'''
    if length == 0.0:
        return RealInterval.zeros()
    width = ic.as_real(length) / pieces
    values = RealInterval.zeros()
    for i in range(pieces):
        values = values + ic.expm1_div(x, (ic.as_real(i + 0.5)) * width)
    peak = ic.exp_real_upper(x * length).max_with(1.0)
    error = ic.as_real(length) * width.sqr() / 24 * RealInterval(0.0, x.mag()) * peak
    return values * width + RealInterval(-error.upper(), error.upper())


def lemma_bounds_check(tc, samples=50, pieces=64, seed=0):
    '''
    Sample pairs s <= t in [0, h] and check, by interval quadrature of the
    exponential majorant of W_tail, that
        W_tail(t,s) <= W_sup,  int_s^t W_tail <= W_inf,  int int W_tail <= Wbar_inf.
    A violation is recorded only when the quadrature lower bound exceeds the
    constant's upper bound.  Test harness; not part of the proof chain.
    '''
    rng = np.random.default_rng(seed)
    h = tc.h.upper()
    x = RealInterval(tc.growth_rate.upper())
    report = LemmaReport()
    pairs = [(0.0, 0.0), (0.0, h)]
    pairs += [tuple(sorted(rng.uniform(0.0, h, 2))) for _ in range(max(0, samples - 2))]
    for s, t in pairs:
        length = t - s
        checks = (
            ("W_sup", ic.exp_real_upper(x * length), tc.W_sup),
            ("W_inf", _tail_integral(x, length, pieces), tc.W_inf),
            ("W_inf_bar", _double_integral(x, length, pieces), tc.W_inf_bar),
        )
        for name, value, bound in checks:
            if value.lower() > bound.upper():
                report.violations.append({"constant": name, "s": s, "t": t,
                                          "value_lo": value.lower(), "bound_hi": bound.upper()})
        report.samples += 1
    return report
