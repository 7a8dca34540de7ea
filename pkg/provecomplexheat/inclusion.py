'''
################
Local existence on one step.

* initial_error(): eps >= ||a(t_lo) - abar(t_lo)||, the distance from the
  enclosure of the true state to the start value of the approximation.
* defect_bound(): delta >= sup_t ||F(abar)(t)|| where
      F(abar) = d abar/dt - e^{i theta} (L abar + abar*abar).
  abar has finitely many nonzero coefficients, so F is a finite Chebyshev-Fourier
  series and the bound is a finite interval sum.
* solve_radius(): the smallest rho with
      f_eps(rho) = W_h [eps + h (2 rho^2 + delta)] <= rho.
  Then the true solution lies within rho of abar on the whole step.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
from dataclasses import dataclass

import interval_core as ic
from interval_core import ComplexInterval, RealInterval
import cheb_time as cheb
from cheb_time import ChebFourier
import fourier_space as fs
from proof_errors import InclusionFailure

logger = logging.getLogger(__name__)

# Relative inflations tried, in order, when f_eps(rho) <= rho is re-verified
ROOT_INFLATIONS = (0.0, 1e-12, 1e-9, 1e-6)


@dataclass(frozen=True)
class DefectBound:
    '''delta = finite + tail; finite covers |k| <= N, tail covers N < |k| <= 2N.'''
    delta: RealInterval
    finite: RealInterval
    tail: RealInterval


@dataclass(frozen=True)
class InclusionResult:
    eps: RealInterval
    delta: RealInterval
    W_h: RealInterval
    h: RealInterval
    rho: RealInterval
    contraction: RealInterval
    success: bool


def initial_error(abar, prev):
    '''
    sum_k |prev_k - abar_k(t_lo)|.  prev is a FourierVec enclosing the true
    state at t_lo; supports of different size are padded.
    '''
    difference = prev - cheb.eval_at_start(abar)
    return RealInterval(0.0, fs.ell1_norm(difference).upper())


def _pad_orders(coeffs, n):
    '''Chebyshev rows 0..n-1, padding with exact zeros.'''
    rows = coeffs.shape[0]
    if rows == n:
        return coeffs
    return ComplexInterval.concatenate([coeffs, ComplexInterval.zeros((n - rows, coeffs.shape[1]))])


def defect_series(abar, theta_over_pi):
    '''F(abar) as a ChebFourier on the modes |k| <= 2N.'''
    N = abar.N
    cis = ic.cis_interval(theta_over_pi)
    square = cheb.cheb_convolve(abar, abar)
    rows = square.n
    derivative = cheb.differentiate(abar).truncate_modes(2 * N)
    symbol = fs.laplacian_symbol(N, ic.omega_interval())
    linear = ChebFourier(abar.t_lo, abar.t_hi, abar.coeffs.scale(symbol.reshape(1, -1))).truncate_modes(2 * N)
    right = _pad_orders(linear.coeffs, rows) + square.coeffs
    F = _pad_orders(derivative.coeffs, rows) - right * cis
    return ChebFourier(abar.t_lo, abar.t_hi, F)


def defect_bound(abar, theta_over_pi):
    '''Rigorous sup-in-time l1 bound of F(abar), split at |k| = N.'''
    N = abar.N
    F = defect_series(abar, theta_over_pi)
    per_mode = cheb.coefficient_majorant(F)
    inner = list(range(N, 3 * N + 1))
    outer = list(range(0, N)) + list(range(3 * N + 1, 4 * N + 1))
    finite = per_mode[inner].sum()
    tail = per_mode[outer].sum() if outer else RealInterval.zeros()
    finite = RealInterval(0.0, finite.upper())
    tail = RealInterval(0.0, tail.upper())
    return DefectBound(finite + tail, finite, tail)


def f_epsilon(rho, eps, delta, W_h, h):
    '''f_eps(rho) = W_h [eps + h (2 rho^2 + delta)].'''
    rho = ic.as_real(rho)
    return ic.as_real(W_h) * (ic.as_real(eps) + ic.as_real(h) * (2 * rho.sqr() + ic.as_real(delta)))


def solve_radius(eps, delta, W_h, h):
    '''
    Smallest root of 2 W_h h rho^2 - rho + W_h (eps + h delta) = 0, computed as
    2c / (1 + sqrt(1 - 4ac)).  The upper endpoint, inflated if needed, is
    re-verified by direct evaluation of f_eps.
    '''
    eps, delta, W_h, h = (RealInterval(0.0, ic.as_real(v).upper()) for v in (eps, delta, W_h, h))
    a = 2 * W_h * h
    c = W_h * (eps + h * delta)
    discriminant = 1 - 4 * a * c
    diagnostics = {"eps": eps.upper(), "delta": delta.upper(), "W_h": W_h.upper(), "h": h.upper(),
                   "discriminant_lo": discriminant.lower()}
    if not discriminant.lower() > 0:
        logger.warning("Inclusion discriminant %.6g is not positive", discriminant.lower())
        raise InclusionFailure("f_eps(rho) <= rho has no solution: discriminant is not positive",
                               diagnostics)
    root = 2 * c / (1 + discriminant.sqrt())

    for inflation in ROOT_INFLATIONS:
        rho = RealInterval(root.upper() * (1.0 + inflation))
        contraction = 2 * W_h * h * rho
        if f_epsilon(rho, eps, delta, W_h, h).upper() <= rho.upper() and contraction.upper() < 1.0:
            return InclusionResult(eps, delta, W_h, h, rho, contraction, True)
    raise InclusionFailure("f_eps(rho) <= rho could not be re-verified at the computed root",
                           dict(diagnostics, rho=root.upper()))
