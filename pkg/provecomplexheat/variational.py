'''
################
Rigorous enclosure of the fundamental matrices Phi(t) and Psi(s) of the
finite (|k| <= m) linearized problem, and the bound W_m.

* Each column of Phi (each row of Psi) is validated by a Newton-Kantorovich
  argument in the weighted space with norm sum_{l,k} |c[l,k]| nu^l:
      Y0 >= ||A f(cbar)||,  Z0 >= ||I - A Df_finite||,  Z1 >= ||A (Df - A_dagger)||.
  Since f is affine, Z0 + Z1 < 1 gives a unique zero within
      r = 1.01 * Y0 / (1 - Z0 - Z1)
  of the approximate column.
* A is the float inverse of the midpoint finite Jacobian, extended by the
  diagonal 1/(2l) for l >= n.
* Z0 and Z1 do not depend on the start vector, so they are computed once
  per matrix; the Y0 of the 2m+1 columns are computed concurrently.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

import interval_core as ic
from interval_core import ComplexInterval, RealInterval
import cheb_time as cheb
from cheb_time import ChebFourier
from proof_errors import DomainMismatchError, RadiiFailure
import approx_solver
import variational_system as vs

logger = logging.getLogger(__name__)

# r = RADIUS_INFLATION * Y0 / (1 - Z0 - Z1)
RADIUS_INFLATION = 1.01


@dataclass(frozen=True)
class RadiiBounds:
    Y0: RealInterval
    Z0: RealInterval
    Z1: RealInterval
    r_min: RealInterval
    success: bool

    @property
    def radius(self):
        '''The validation radius actually used: r_min inflated by 1%, as a float.'''
        return (self.r_min * RADIUS_INFLATION).upper()


@dataclass(frozen=True)
class ChebMatrix:
    '''
    Validated fundamental matrix on [t_lo, t_hi].

    * columns[j] is the series of column j (Phi), or of row j when
      transposed is True (Psi, solved through the adjoint problem).
    * radii[j] bounds the weighted distance from columns[j] to the exact
      solution.
    '''
    t_lo: float
    t_hi: float
    m: int
    nu: RealInterval
    columns: tuple
    radii: np.ndarray
    bounds: tuple
    transposed: bool

    @property
    def n(self):
        return self.columns[0].n

    def same_interval(self, other):
        return self.t_lo == other.t_lo and self.t_hi == other.t_hi


def order_weights(nu, n, m):
    '''nu^l for every unknown, in the flattened order l*(2m+1) + (k+m).'''
    powers = cheb.nu_powers(nu, n)
    width = 2 * m + 1
    return RealInterval(np.repeat(powers.lo, width), np.repeat(powers.hi, width))


def weighted_operator_norm(matrix, weights):
    '''
    Operator norm on the weighted l1 space: the maximum over columns q of
    (sum_p |M[p,q]| w[p]) / w[q].
    '''
    column_sums = (matrix.abs() * weights.reshape(-1, 1)).sum(axis=0)
    return (column_sums / weights).max()


def residual_f(problem, column, b, A, nu):
    '''
    Y0 for the column started at e_b:
        sum over l < n of |(A f_finite)[l,k]| nu^l
      + sum over l >= n of |f[l,k]| nu^l / (2l).
    '''
    n, m = column.n, problem.m
    f = vs.residual_rows(problem, column, b)
    finite = f[:n].reshape(-1, 1)
    corrected = ic.matmul(A, finite).reshape(-1)
    weights = order_weights(nu, n, m)
    total = (corrected.abs() * weights).sum()
    rows = f.shape[0]
    if rows > n:
        tail_l = np.arange(n, rows)
        powers = cheb.nu_powers(nu, rows)[n:]
        tail_weights = powers / ic.as_real(2.0 * tail_l)
        total = total + (f[n:].abs() * tail_weights.reshape(-1, 1)).sum()
    return total


def bound_Z0(A, Df, nu, m=0):
    '''Weighted norm of I - A Df on the finite block; rows and columns ordered as l*(2m+1)+(k+m).'''
    size = A.shape[0]
    if A.shape != (size, size) or Df.shape != (size, size):
        raise DomainMismatchError("bound_Z0() needs square matrices of equal size",
                                  {"A": A.shape, "Df": Df.shape})
    width = 2 * m + 1
    B = ic.identity(size) - ic.matmul(A, Df)
    return weighted_operator_norm(B, order_weights(nu, size // width, m))


def _psi_bound(kernel_abs, inverse_powers, ell, n, m):
    '''
    Upper bound, for each k, of max over l2 >= n and |k2| <= m of
    (|K[|ell-l2|, k-k2]| + |K[ell+l2, k-k2]|) / nu^l2.
    '''
    width = 2 * m + 1
    n_kernel = kernel_abs.shape[0]
    totals = [RealInterval.zeros() for _ in range(width)]
    ranges = (
        # j = l2 - ell >= n - ell, weight nu^-(j+ell)
        (max(0, n - ell), ell),
        # j = l2 + ell >= n + ell, weight nu^-(j-ell)
        (n + ell, -ell),
    )
    for j_start, shift in ranges:
        if j_start >= n_kernel:
            continue
        j = np.arange(j_start, n_kernel)
        weights = inverse_powers[j + shift].reshape(-1, 1)
        for k in range(-m, m + 1):
            # kernel columns k - k2 + 2m for k2 = m..-m
            block = kernel_abs[j_start:, k + m:k + 3 * m + 1]
            totals[k + m] = totals[k + m] + (block * weights).max()
    return _stack(totals)


def z1_tail_term(lam_max, kernel_norm, n, nu):
    '''(1/2n) (nu + 1/nu) (|lam_m| + 4 ||K||_nu): rows l >= n, where A is 1/(2l).'''
    nu = ic.as_real(nu)
    return (nu + 1 / nu) * (ic.as_real(lam_max) + 4 * ic.as_real(kernel_norm)) / (2 * n)


def bound_Z1(A, problem, n, nu):
    m = problem.m
    width = 2 * m + 1
    nu = ic.as_real(nu)
    kernel_abs = problem.kernel.coeffs.abs()
    n_kernel = kernel_abs.shape[0]
    inverse_powers = ic.as_real(1.0) / cheb.nu_powers(nu, n_kernel + 2 * n + 2)
    nu_n_inverse = inverse_powers[n]

    first = 2 * nu_n_inverse
    rows = [RealInterval(np.full(width, first.lo), np.full(width, first.hi))]
    for ell in range(1, n):
        row = (_psi_bound(kernel_abs, inverse_powers, ell - 1, n, m)
               + _psi_bound(kernel_abs, inverse_powers, ell + 1, n, m))
        if ell == n - 1:
            # The lam_k c[n,k] term, left out of the finite Jacobian
            row = row + problem.lam.abs() * nu_n_inverse
        rows.append(row)
    zhat = _stack(rows)

    bounded = (A.abs() * zhat.reshape(1, -1)).sum(axis=1)
    finite = (bounded * order_weights(nu, n, m)).sum()
    lam_max = problem.lam.abs().max()
    kernel_norm = cheb.weighted_norm(problem.kernel, nu).value
    return finite + z1_tail_term(lam_max, kernel_norm, n, nu)


def validate_matrix(abar, m, n, nu, theta_over_pi, adjoint=False, columns=None, workers=None):
    '''
    Validated Phi (or Psi when adjoint is True) on the step of abar.
    columns: optional approximate column coefficients (2m+1, n, 2m+1);
    computed by approx_solver when omitted.
    '''
    nu = ic.as_real(nu)
    if nu.lower() < 1.0:
        raise ValueError("Chebyshev decay rate nu must be at least 1")
    problem = vs.variational_problem(abar, m, theta_over_pi, adjoint=adjoint)
    Df = vs.operator_matrix(problem, n)
    try:
        A_mid = np.linalg.inv(Df.mid())
    except np.linalg.LinAlgError as err:
        raise RadiiFailure("Midpoint variational matrix is singular",
                           {"m": m, "n": n, "adjoint": adjoint}) from err
    if not np.all(np.isfinite(A_mid)):
        raise RadiiFailure("Approximate inverse has non-finite entries",
                           {"m": m, "n": n, "adjoint": adjoint})
    A = ComplexInterval.from_complex(A_mid)
    if columns is None:
        columns = approx_solver.solve_columns(problem, n, workers)

    Z0 = bound_Z0(A, Df, nu, m)
    Z1 = bound_Z1(A, problem, n, nu)
    series = tuple(ChebFourier.from_complex(abar.t_lo, abar.t_hi, columns[b + m])
                   for b in range(-m, m + 1))

    def column_bound(b):
        return residual_f(problem, series[b + m], b, A, nu)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        Y0s = list(pool.map(column_bound, range(-m, m + 1)))

    label = "Psi" if adjoint else "Phi"
    if not (Z0 + Z1).upper() < 1.0:
        diagnostics = {"matrix": label, "Y0": max(Y0.upper() for Y0 in Y0s),
                       "Z0": Z0.upper(), "Z1": Z1.upper(), "m": m, "n": n}
        logger.warning("Validation of %s failed: Z0 + Z1 = %.6g >= 1", label, (Z0 + Z1).upper())
        raise RadiiFailure("Z0 + Z1 >= 1 for %s" % label, diagnostics)
    bounds = [RadiiBounds(Y0, Z0, Z1, Y0 / (1 - Z0 - Z1), True) for Y0 in Y0s]
    radii = np.array([bound.radius for bound in bounds])
    logger.debug("%s validated: Z0=%.3g Z1=%.3g max r=%.3g", label, Z0.upper(), Z1.upper(), radii.max())
    return ChebMatrix(abar.t_lo, abar.t_hi, m, nu, series, radii, tuple(bounds), adjoint)


def _matrix_norm(entry_bounds, radii, transposed):
    '''
    l1 operator norm bound from per-entry bounds entry_bounds[j, k] of
    stored column j, each entry off by at most 2*radii[j].
    '''
    errors = (2.0 * radii)[:, None]
    if transposed:
        # Stored columns are rows of the matrix: sum over j for each k
        terms = np.concatenate([entry_bounds, np.repeat(errors, entry_bounds.shape[1], axis=1)], axis=0)
        sums = ic.sum_upper(terms, axis=0)
    else:
        sums = ic.sum_upper(np.concatenate([entry_bounds, errors], axis=1), axis=1)
    upper = float(np.max(sums))
    return RealInterval(0.0, upper)


def sup_norm_matrix(matrix, refine=False):
    '''Bound of sup over the step of ||matrix(t)||_1, by coefficient majorants.'''
    entries = np.array([cheb.sup_abs_modes(column, refine=refine) for column in matrix.columns])
    return _matrix_norm(entries, matrix.radii, matrix.transposed)


def norm_at_end(matrix):
    '''Bound of ||matrix(t_hi)||_1.'''
    entries = np.array([cheb.eval_at_end(column).coeffs.abs_upper() for column in matrix.columns])
    return _matrix_norm(entries, matrix.radii, matrix.transposed)


def compute_Wm(phi, psi, refine=False):
    '''W_m >= sup_t ||Phi(t)||_1 * sup_s ||Psi(s)||_1.'''
    if not phi.same_interval(psi):
        raise DomainMismatchError("Phi and Psi are validated on different intervals",
                                  {"phi": [phi.t_lo, phi.t_hi], "psi": [psi.t_lo, psi.t_hi]})
    return sup_norm_matrix(phi, refine) * sup_norm_matrix(psi, refine)


def _stack(parts):
    return RealInterval(np.stack([p.lo for p in parts]), np.stack([p.hi for p in parts]))
