'''
################
The linearized problem around an approximate solution, written in
Chebyshev-integral form on one time step.

* The forward problem is
      dc/dt = e^{i theta} (L c + 2 pi_m(abar * c)),   c(t_lo) = e_b,   |k| <= m.
  The adjoint problem dPsi/ds = -Psi A(s) is solved row by row: each row
  of Psi solves the same kind of equation with the sign flipped and the
  convolution transposed, i.e. with abar_{-k} in place of abar_k.
* With tau in [-1, 1] and the storage convention of cheb_time, the
  coefficients c[l, k] of a column satisfy
      row 0:   c[0] + 2 sum_l (-1)^l c[l] - e_b = 0
      row l:   2 l c[l] + lam_k (c[l+1] - c[l-1]) + K(c)[l+1] - K(c)[l-1] = 0
  where lam_k = -s (h/2) e^{i theta} k^2 omega^2, K(c) = s h e^{i theta} (abar * c),
  and s = +1 (forward) or -1 (adjoint).
* The unknown c[l, k] sits at position l*(2m+1) + (k+m) of the flattened vector.

This module is called by approx_solver.py (midpoint matrices) and
variational.py (interval matrices and residuals).

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

from dataclasses import dataclass

import numpy as np

import interval_core as ic
from interval_core import ComplexInterval
from cheb_time import ChebFourier, cheb_convolve
from fourier_space import laplacian_symbol


@dataclass(frozen=True)
class VariationalProblem:
    '''
    kernel: the ChebFourier s*h*e^{i theta}*abar' on modes |k| <= 2m, where
            abar' is abar (forward) or abar with k -> -k (adjoint)
    lam:    ComplexInterval of lam_k for k = -m..m
    '''
    kernel: ChebFourier
    lam: ComplexInterval
    m: int
    adjoint: bool


def variational_problem(abar, m, theta_over_pi, adjoint=False):
    if m < 0:
        raise ValueError("Projection order m must be non-negative")
    sign = -1.0 if adjoint else 1.0
    cis = ic.cis_interval(theta_over_pi)
    h = abar.step_length()
    source = abar.truncate_modes(2 * m)
    coeffs = source.coeffs
    if adjoint:
        coeffs = coeffs[:, ::-1]
    kernel = ChebFourier(abar.t_lo, abar.t_hi, coeffs * (cis * (h * sign)))
    # lam_k = -s (h/2) e^{i theta} k^2 omega^2 = s (h/2) e^{i theta} * laplacian symbol
    symbol = laplacian_symbol(m, ic.omega_interval())
    lam = (cis * (h * (0.5 * sign))) * symbol
    return VariationalProblem(kernel, lam, m, adjoint)


def unknown_index(l, k, m):
    return l * (2 * m + 1) + (k + m)


def _padded_kernel(kernel_values):
    '''The kernel array with one extra zero row and column, used for out-of-range gathers.'''
    rows, cols = kernel_values.shape
    if isinstance(kernel_values, ComplexInterval):
        padded = ComplexInterval.zeros((rows + 1, cols + 1))
        padded.set_at((slice(0, rows), slice(0, cols)), kernel_values)
        return padded
    padded = np.zeros((rows + 1, cols + 1), dtype=np.complex128)
    padded[:rows, :cols] = kernel_values
    return padded


def _operator_from(kernel_values, lam_values, n, m):
    '''
    Assemble the n(2m+1) square matrix of the finite problem from kernel
    coefficients and lam_k, both given either as ComplexInterval or as
    complex numpy arrays.
    '''
    width = 2 * m + 1
    n_kernel = kernel_values.shape[0]
    padded = _padded_kernel(kernel_values)
    zero_row, zero_col = n_kernel, kernel_values.shape[1]

    size = n * width
    index = np.arange(size)
    row_l, row_k = np.divmod(index, width)
    row_k = row_k - m
    L1, L2 = np.meshgrid(row_l, row_l, indexing="ij")
    K1, K2 = np.meshgrid(row_k, row_k, indexing="ij")
    # Kernel column index of k - k2 on the modes -2m..2m
    dk = K1 - K2 + 2 * m

    def gather(j):
        '''(kernel * e_{l2,k2})[j, k] = K[|j-l2|, k-k2] + [l2>0] K[j+l2, k-k2].'''
        first = np.abs(j - L2)
        second = j + L2
        first = np.where(first < n_kernel, first, zero_row)
        second = np.where((L2 > 0) & (second < n_kernel), second, zero_row)
        cols = np.where(L1 > 0, dk, zero_col)
        return padded[(first, cols)] + padded[(second, cols)]

    nonlinear = gather(L1 + 1) - gather(L1 - 1)

    same_mode = K1 == K2
    constant = np.zeros((size, size))
    lam_sign = np.zeros((size, size))
    # Initial-condition row
    first_row = same_mode & (L1 == 0)
    constant[first_row] = np.where(L2[first_row] == 0, 1.0,
                                   np.where(L2[first_row] % 2 == 0, 2.0, -2.0))
    # Integral rows
    rest = same_mode & (L1 > 0)
    constant[rest & (L2 == L1)] = 2.0 * L1[rest & (L2 == L1)]
    lam_sign[rest & (L2 == L1 + 1)] = 1.0
    lam_sign[rest & (L2 == L1 - 1)] = -1.0

    lam_rows = lam_values[K1 + m]
    if isinstance(kernel_values, ComplexInterval):
        return nonlinear + ic.as_complex(constant) + lam_rows * ic.as_real(lam_sign)
    return nonlinear + constant + lam_rows * lam_sign


def operator_matrix(problem, n):
    '''Interval enclosure of the finite Jacobian Df for columns of Chebyshev order n.'''
    return _operator_from(problem.kernel.coeffs, problem.lam, n, problem.m)


def operator_matrix_mid(problem, n):
    '''The same matrix built from midpoints, as a complex numpy array.'''
    return _operator_from(problem.kernel.coeffs.mid(), problem.lam.mid(), n, problem.m)


def unit_rhs(n, m, b):
    '''The right-hand side e_b placed in the initial-condition row.'''
    rhs = np.zeros(n * (2 * m + 1), dtype=np.complex128)
    rhs[unknown_index(0, b, m)] = 1.0
    return rhs


def residual_rows(problem, column, b):
    '''
    Interval evaluation of f(c) for a column series c (ChebFourier on modes
    |k| <= m) started at e_b.  The result has rows l = 0..L, where L covers
    every nonzero row: the kernel product reaches order n_K + n - 2 and lam
    reaches row n.
    '''
    m = problem.m
    width = 2 * m + 1
    if column.N != m or not column.same_interval(problem.kernel):
        raise ValueError("Column series must live on modes |k| <= m of the same time interval")
    n = column.n
    product = cheb_convolve(problem.kernel, column).truncate_modes(m).coeffs
    last = max(n, product.shape[0])
    rows = last + 2

    c = ComplexInterval.zeros((rows, width))
    c.set_at(slice(0, n), column.coeffs)
    nl = ComplexInterval.zeros((rows, width))
    nl.set_at(slice(0, product.shape[0]), product)

    f = ComplexInterval.zeros((last + 1, width))
    weights = np.full(rows, 2.0)
    weights[0] = 1.0
    weights[1::2] = -2.0
    start_value = c.scale(ic.as_real(weights[:, None])).sum(axis=0)
    start_value = start_value - ic.as_complex(np.eye(width)[b + m])
    f.set_at(0, start_value)

    l = np.arange(1, last + 1)
    body = (c[1:last + 1].scale(ic.as_real(2.0 * l[:, None]))
            + (c[2:last + 2] - c[0:last]) * problem.lam.reshape(1, width)
            + nl[2:last + 2] - nl[0:last])
    f.set_at(slice(1, last + 1), body)
    return f
