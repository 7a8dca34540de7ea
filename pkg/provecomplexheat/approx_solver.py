'''
################
Nonrigorous approximate solutions, used as centers of the rigorous proofs.

* solve_step() computes abar(t) on one step for the Galerkin system
      da_k/dt = e^{i theta} (-k^2 omega^2 a_k + (a*a)_k),   |k| <= N
  by Chebyshev collocation on n second-kind nodes.  scipy's DOP853
  integrator provides the starting values, and a dense Newton iteration
  solves the collocation equations.
* solve_variational_columns() computes approximate fundamental matrices
  for the forward and adjoint variational problems.  The columns are
  solved concurrently from one LU factorization.
* Everything here is floating point.  Outputs are promoted to point
  intervals, and rigor enters later through residual bounds.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.integrate
import scipy.linalg

from cheb_time import ChebFourier
from proof_errors import SolverFailure
import variational_system as vs

logger = logging.getLogger(__name__)

OMEGA = 2.0 * math.pi

# Tolerances of the DOP853 starting solve
IVP_RTOL = 1e-12
IVP_ATOL = 1e-14


@dataclass(frozen=True)
class SolveConfig:
    N: int
    n: int
    theta_over_pi: Fraction
    t_lo: float
    t_hi: float
    newton_tolerance: float = 1e-13
    max_newton_iterations: int = 25

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("Fourier order N must be at least 1")
        if self.n < 2:
            raise ValueError("Chebyshev order n must be at least 2")
        if not abs(Fraction(self.theta_over_pi)) < Fraction(1, 2):
            raise ValueError("theta must satisfy |theta| < pi/2")
        if not self.t_lo < self.t_hi:
            raise ValueError("Step interval needs t_lo < t_hi")

    @property
    def theta(self):
        return float(Fraction(self.theta_over_pi)) * math.pi

    @property
    def h(self):
        return self.t_hi - self.t_lo

    def rotation(self):
        return complex(math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class ApproxFundamental:
    '''
    forward[b]: coefficients (n, 2m+1) of column b of Phi (Phi(t_lo) = Id).
    adjoint[b]: coefficients of row b of Psi (Psi(t_lo) = Id).
    '''
    forward: np.ndarray
    adjoint: np.ndarray


def chebyshev_nodes(n):
    '''Second-kind nodes -cos(j pi/(n-1)) in ascending order, endpoints included.'''
    return np.cos(_node_angles(n))


def _node_angles(n):
    return np.pi * np.arange(n - 1, -1, -1) / (n - 1)


def differentiation_matrix(n):
    '''Collocation derivative d/dtau on chebyshev_nodes(n).'''
    x = chebyshev_nodes(n)
    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c = c * (-1.0) ** np.arange(n)
    dx = x[:, None] - x[None, :] + np.eye(n)
    D = (c[:, None] / c[None, :]) / dx
    D = D - np.diag(D.sum(axis=1))
    return D


def values_to_coefficients(values):
    '''
    Chebyshev coefficients in the storage convention (c0 + 2 sum c_l T_l)
    from values at chebyshev_nodes(n), along axis 0.
    '''
    n = values.shape[0]
    angles = _node_angles(n)
    ell = np.arange(n)[:, None]
    weights = np.ones(n)
    weights[0] = weights[-1] = 0.5
    transform = (2.0 / (n - 1)) * np.cos(ell * angles[None, :]) * weights[None, :]
    transform[0] *= 0.5
    transform[-1] *= 0.5
    transform[1:] *= 0.5
    return np.tensordot(transform, values, axes=(1, 0))


def _truncated_square(v):
    N = (len(v) - 1) // 2
    return np.convolve(v, v)[N:3 * N + 1]


def galerkin_rhs(a, theta):
    '''e^{i theta} (-k^2 omega^2 a_k + (a*a)_k) truncated to |k| <= N.'''
    N = (len(a) - 1) // 2
    k = np.arange(-N, N + 1)
    rotation = complex(math.cos(theta), math.sin(theta))
    return rotation * (-(k * OMEGA) ** 2 * a + _truncated_square(a))


def _convolution_matrix(v):
    '''C with (C w)_k = sum_q v_{k-q} w_q, truncated to |k|, |q| <= N.'''
    N = (len(v) - 1) // 2
    idx = np.arange(2 * N + 1)
    offset = idx[:, None] - idx[None, :] + N
    valid = (offset >= 0) & (offset <= 2 * N)
    return np.where(valid, v[np.clip(offset, 0, 2 * N)], 0.0)


def _fit_initial_data(u0, N):
    u0 = np.asarray(u0, dtype=np.complex128)
    M = (len(u0) - 1) // 2
    if M <= N:
        padded = np.zeros(2 * N + 1, dtype=np.complex128)
        padded[N - M:N + M + 1] = u0
        return padded
    outside = np.concatenate([u0[:M - N], u0[M + N + 1:]])
    if np.any(outside != 0):
        raise ValueError("Initial data has modes beyond the Fourier order N=%d" % N)
    return u0[M - N:M + N + 1]


def _starting_values(u0, cfg, nodes):
    times = (nodes + 1.0) * (cfg.h / 2.0)
    times[-1] = cfg.h
    result = scipy.integrate.solve_ivp(
        lambda t, a: galerkin_rhs(a, cfg.theta), (0.0, cfg.h), u0,
        method="DOP853", t_eval=times, rtol=IVP_RTOL, atol=IVP_ATOL)
    if not result.success or result.y.shape[1] != len(nodes) or not np.all(np.isfinite(result.y)):
        raise SolverFailure("DOP853 starting solve failed on [%r, %r]" % (cfg.t_lo, cfg.t_hi),
                            {"message": str(result.message)})
    return result.y.T.copy()


def _newton_collocation(values, u0, cfg, D):
    n, width = values.shape
    N = (width - 1) // 2
    k = np.arange(-N, N + 1)
    scale = (cfg.h / 2.0) * cfg.rotation()
    symbol = -(k * OMEGA) ** 2
    identity = np.eye(width)

    for iteration in range(1, cfg.max_newton_iterations + 1):
        residual = D @ values - scale * (symbol * values
                                         + np.array([_truncated_square(v) for v in values]))
        residual[0] = values[0] - u0

        jacobian = np.kron(D, identity).astype(np.complex128)
        for i in range(1, n):
            block = slice(i * width, (i + 1) * width)
            jacobian[block, block] -= scale * (np.diag(symbol) + 2.0 * _convolution_matrix(values[i]))
        jacobian[0:width, :] = 0.0
        jacobian[0:width, 0:width] = identity

        try:
            update = scipy.linalg.solve(jacobian, residual.reshape(-1))
        except (scipy.linalg.LinAlgError, ValueError) as err:
            raise SolverFailure("Collocation Jacobian is singular", {"iteration": iteration}) from err
        values = values - update.reshape(n, width)
        size = max(1.0, float(np.max(np.abs(values))))
        step = float(np.max(np.abs(update)))
        if not np.isfinite(step):
            raise SolverFailure("Newton iteration produced non-finite values", {"iteration": iteration})
        if step <= cfg.newton_tolerance * size:
            logger.debug("Collocation Newton converged in %d iterations", iteration)
            return values
    raise SolverFailure("Newton iteration did not converge",
                        {"iterations": cfg.max_newton_iterations, "last_update": step})


def solve_step(u0, cfg):
    '''
    Approximate solution on [t_lo, t_hi] from initial Fourier coefficients u0
    (complex array indexed k + M).  Returns a ChebFourier of point intervals.
    '''
    u0 = _fit_initial_data(u0, cfg.N)
    if not np.any(u0):
        return ChebFourier.zeros(cfg.t_lo, cfg.t_hi, cfg.n, cfg.N)
    nodes = chebyshev_nodes(cfg.n)
    values = _starting_values(u0, cfg, nodes)
    values = _newton_collocation(values, u0, cfg, differentiation_matrix(cfg.n))
    return ChebFourier.from_complex(cfg.t_lo, cfg.t_hi, values_to_coefficients(values))


def solve_columns(problem, n, workers=None):
    '''
    Midpoint solutions of the finite Chebyshev problem for every unit start
    vector e_b, b = -m..m.  Returns a complex array (2m+1, n, 2m+1).
    '''
    m = problem.m
    matrix = vs.operator_matrix_mid(problem, n)
    if not np.all(np.isfinite(matrix)):
        raise SolverFailure("Variational matrix has non-finite entries", {"m": m, "n": n})
    factor = scipy.linalg.lu_factor(matrix, check_finite=False)

    def solve_column(b):
        return scipy.linalg.lu_solve(factor, vs.unit_rhs(n, m, b)).reshape(n, 2 * m + 1)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        columns = np.array(list(pool.map(solve_column, range(-m, m + 1))))
    if not np.all(np.isfinite(columns)):
        raise SolverFailure("Variational column solve produced non-finite values",
                            {"m": m, "n": n, "adjoint": problem.adjoint})
    return columns


def solve_variational_columns(abar, m, theta_over_pi, n=None, workers=None):
    '''Approximate Phi and Psi for the step of abar; n defaults to abar.n.'''
    if m > abar.N:
        raise ValueError("Projection order m=%d exceeds the Fourier order N=%d" % (m, abar.N))
    n = abar.n if n is None else n
    forward = solve_columns(vs.variational_problem(abar, m, theta_over_pi), n, workers)
    adjoint = solve_columns(vs.variational_problem(abar, m, theta_over_pi, adjoint=True), n, workers)
    return ApproxFundamental(forward, adjoint)
