'''
################
Rigorous integration along a piecewise-linear contour in complex time.

* Each step [t_lo, t_hi] of a segment with angle theta is validated by
  validate_step(): approximate solution, validated Phi and Psi, W_m, tail
  constants, W_h, defect bound and the inclusion radius rho.
* The point-wise error at the step end is
      eps_i = W_t eps_{i-1} + W_J h (2 rho^2 + delta) + eps_hat_i,
  where eps_hat_i is the distance from abar_i(t_hi) to abar_{i+1}(t_hi).
  eps_hat_i needs the next approximation, so certificate i is final only
  when step i+1 has been validated.  The last step has eps_hat = 0.
* A failed step is retried with h halved (up to max_halvings times), then once
  with m raised by 2, then StepFailure is raised.  The reduced h and the raised
  m are kept for the rest of the segment.
* Certificates record the complex-time position z_i = sum_j h_j e^{i theta_j}.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
from dataclasses import dataclass, replace

import interval_core as ic
from interval_core import ComplexInterval, RealInterval
import cheb_time as cheb
import fourier_space as fs
import approx_solver
from approx_solver import SolveConfig
import variational
import evolution
import inclusion
from evolution import EvolutionBound, TailConstants
from inclusion import DefectBound, InclusionResult
from proof_config import ContourSchedule, SolverSettings
from proof_errors import (DomainMismatchError, InclusionFailure, RadiiFailure, SolverFailure,
                          StepFailure, TailCouplingFailure)

logger = logging.getLogger(__name__)

# Failures that a smaller step or a larger projection order can cure
RECOVERABLE_FAILURES = (SolverFailure, RadiiFailure, TailCouplingFailure, InclusionFailure)


@dataclass(frozen=True)
class MatrixSummary:
    '''Per-column validation bounds of Phi or Psi, kept for replay.'''
    label: str
    Z0: RealInterval
    Z1: RealInterval
    Y0: tuple
    radii: tuple

    @classmethod
    def of(cls, label, matrix):
        return cls(label, matrix.bounds[0].Z0, matrix.bounds[0].Z1,
                   tuple(b.Y0 for b in matrix.bounds), tuple(float(r) for r in matrix.radii))


@dataclass(frozen=True)
class StepCertificate:
    index: int
    segment: int
    theta_over_pi: object
    t_lo: float
    t_hi: float
    z_end: ComplexInterval
    N: int
    n: int
    m: int
    nu: RealInterval
    phi: MatrixSummary
    psi: MatrixSummary
    W_m: RealInterval
    tail: TailConstants
    evolution: EvolutionBound
    defect: DefectBound
    inclusion: InclusionResult
    phi_end_norm: RealInterval
    psi_sup_norm: RealInterval
    W_J: RealInterval
    W_t: RealInterval
    eps_in: RealInterval
    eps_hat: RealInterval
    eps_out: RealInterval
    status: str = "validated"

    @property
    def h(self):
        return self.tail.h

    @property
    def rho(self):
        return self.inclusion.rho

    @property
    def delta(self):
        return self.defect.delta

    @property
    def W_h(self):
        return self.evolution.W_h


def endpoint_entries(phi_end_norm, psi_sup_norm, tc, W_m):
    '''
    The 2x2 block matrices behind W_J and W_t, from ||Phi(t_hi)||, sup ||Psi||
    and the tail constants.  Returns (entries_J, entries_t).
    '''
    P, S = ic.as_real(phi_end_norm), ic.as_real(psi_sup_norm)
    W_m = ic.as_real(W_m)
    h, s = tc.h, tc.abar_s_norm
    inv_kappa = 1 / tc.kappa
    coupling = 4 * W_m * tc.W_inf * s.sqr() * inv_kappa
    tail_gain = 4 * W_m * tc.W_inf.sqr() * s.sqr() * inv_kappa
    lower_left = 2 * W_m * tc.W_inf * s * inv_kappa

    entries_J = ((P * S * (1 + h * coupling), 2 * P * h * S * s * (tc.W_sup + tail_gain)),
                 (lower_left, tc.W_sup + tail_gain))
    entries_t = ((P * (1 + h * S * coupling), 2 * P * h * s * (tc.W_sup + tail_gain)),
                 (lower_left, tc.W_end + tail_gain))
    return entries_J, entries_t


def endpoint_bounds(phi_end_norm, psi_sup_norm, tc, W_m):
    '''(W_J, W_t) from ||Phi(t_hi)|| and sup ||Psi|| of the step, so a replay needs no matrices.'''
    entries_J, entries_t = endpoint_entries(phi_end_norm, psi_sup_norm, tc, W_m)
    W_J = evolution.block_norm1(*entries_J[0], *entries_J[1])
    W_t = evolution.block_norm1(*entries_t[0], *entries_t[1])
    return W_J, W_t


def endpoint_mismatch(abar_prev, abar_next):
    '''||abar_prev(t_hi) - abar_next(t_lo)||, the two series meeting at one time.'''
    if abar_prev.t_hi != abar_next.t_lo:
        raise DomainMismatchError("Consecutive steps do not meet",
                                  {"prev_t_hi": abar_prev.t_hi, "next_t_lo": abar_next.t_lo})
    difference = cheb.eval_at_end(abar_prev) - cheb.eval_at_start(abar_next)
    return RealInterval(0.0, fs.ell1_norm(difference).upper())


def propagate_endpoint_error(W_t, W_J, eps_prev, h, rho, delta, eps_hat):
    '''eps_i = W_t eps_{i-1} + W_J h (2 rho^2 + delta) + eps_hat.'''
    rho = ic.as_real(rho)
    value = (ic.as_real(W_t) * ic.as_real(eps_prev)
             + ic.as_real(W_J) * ic.as_real(h) * (2 * rho.sqr() + ic.as_real(delta))
             + ic.as_real(eps_hat))
    return RealInterval(0.0, value.upper())


def validate_step(abar, eps_in, theta_over_pi, m, n_columns, nu, solver=SolverSettings()):
    '''
    All bounds of one step for the approximate solution abar, with eps_in the
    error at t_lo.  Returns a StepCertificate whose eps_hat is 0 and whose
    eps_out is the error against abar(t_hi).
    '''
    approx = approx_solver.solve_variational_columns(abar, m, theta_over_pi, n=n_columns,
                                                     workers=solver.workers)
    phi = variational.validate_matrix(abar, m, n_columns, nu, theta_over_pi,
                                      columns=approx.forward, workers=solver.workers)
    psi = variational.validate_matrix(abar, m, n_columns, nu, theta_over_pi, adjoint=True,
                                      columns=approx.adjoint, workers=solver.workers)
    W_m = variational.compute_Wm(phi, psi, solver.refine_sup)
    tc = evolution.tail_constants(abar, m, theta_over_pi, W_m, solver.refine_sup)
    bound = evolution.assemble_Wh(W_m, tc)
    defect = inclusion.defect_bound(abar, theta_over_pi)
    result = inclusion.solve_radius(eps_in, defect.delta, bound.W_h, tc.h)

    phi_end_norm = variational.norm_at_end(phi)
    psi_sup_norm = variational.sup_norm_matrix(psi, solver.refine_sup)
    W_J, W_t = endpoint_bounds(phi_end_norm, psi_sup_norm, tc, W_m)
    zero = RealInterval.zeros()
    eps_out = propagate_endpoint_error(W_t, W_J, result.eps, tc.h, result.rho, defect.delta, zero)
    return StepCertificate(
        index=0, segment=0, theta_over_pi=theta_over_pi, t_lo=abar.t_lo, t_hi=abar.t_hi,
        z_end=ComplexInterval.zeros(), N=abar.N, n=abar.n, m=m, nu=ic.as_real(nu),
        phi=MatrixSummary.of("Phi", phi), psi=MatrixSummary.of("Psi", psi),
        W_m=W_m, tail=tc, evolution=bound, defect=defect, inclusion=result,
        phi_end_norm=phi_end_norm, psi_sup_norm=psi_sup_norm, W_J=W_J, W_t=W_t,
        eps_in=result.eps, eps_hat=zero, eps_out=eps_out)


def _grid_end(segment, t, h):
    t_hi = t + h
    if segment.reaches_end(t_hi):
        return segment.t_end
    return t_hi


def _attempts(h, m, max_halvings):
    '''(h, m) pairs tried for one step.'''
    for j in range(max_halvings + 1):
        yield h / 2 ** j, m
    yield h, m + 2


@dataclass
class _Pending:
    '''The last validated step, waiting for the next approximation.'''
    certificate: StepCertificate
    abar: object


def run_contour(u0, schedule: ContourSchedule, solver=SolverSettings(), eps0=0.0,
                max_steps=None, stop_when=None, on_certificate=None):
    '''
    Integrate from the enclosure u0 (FourierVec) along schedule.

    * eps0: extra initial error added to the distance between u0 and abar_1(t_lo)
    * max_steps: stop after this many validated steps
    * stop_when(certificate, endpoint): called after each validated step with
      the provisional certificate and abar(t_hi); a true result ends the run
      at that step
    * on_certificate(certificate): called once for each final certificate

    Returns the list of final StepCertificate.  Raises StepFailure when a step
    fails after all retries; the exception carries the certificates completed.
    '''
    certificates = []
    pending = None
    z = ComplexInterval.zeros()
    u_mid = u0.mid()
    index = 0

    def finalize(eps_hat, eps_in_next=None):
        '''Close the pending step with its mismatch eps_hat.'''
        cert = pending.certificate
        eps_out = cert.eps_out if eps_in_next is None else eps_in_next
        final = replace(cert, eps_hat=eps_hat, eps_out=eps_out)
        certificates.append(final)
        if on_certificate is not None:
            on_certificate(final)

    for segment_index, segment in enumerate(schedule.segments):
        t = segment.t_start
        h = segment.step_size
        m = segment.m
        cis = ic.cis_interval(segment.theta_over_pi)
        nu = segment.decay_rate()

        while not segment.reaches_end(t):
            if max_steps is not None and index >= max_steps:
                logger.info("Stopping after max_steps = %d validated steps", max_steps)
                if pending is not None:
                    finalize(RealInterval.zeros())
                return certificates

            failure = None
            step_cert = None
            for h_try, m_try in _attempts(h, m, solver.max_halvings):
                if m_try > segment.N:
                    continue
                t_hi = _grid_end(segment, t, h_try)
                cfg = SolveConfig(segment.N, segment.n, segment.theta_over_pi, t, t_hi,
                                  solver.newton_tolerance, solver.max_newton_iterations)
                try:
                    abar = approx_solver.solve_step(u_mid, cfg)
                    if pending is None:
                        eps_hat = None
                        eps_in = ic.as_real(eps0) + inclusion.initial_error(abar, u0)
                    else:
                        eps_hat = endpoint_mismatch(pending.abar, abar)
                        eps_in = pending.certificate.eps_out + eps_hat
                    step_cert = validate_step(abar, eps_in, segment.theta_over_pi, m_try,
                                              segment.column_order, nu, solver)
                except RECOVERABLE_FAILURES as err:
                    failure = err
                    logger.warning("Step %d on [%r, %r] failed (%s): %s; retrying",
                                   index + 1, t, t_hi, type(err).__name__, err)
                    continue
                h, m = h_try, m_try
                break

            if step_cert is None:
                if pending is not None:
                    finalize(RealInterval.zeros())
                failing = type(failure).__name__ if failure is not None else "none"
                diagnostics = dict(getattr(failure, "diagnostics", {}), t_lo=t)
                raise StepFailure("Step %d failed after all retries" % (index + 1), index + 1,
                                  failing, certificates, diagnostics)

            if pending is not None:
                finalize(eps_hat, step_cert.eps_in)
            index += 1
            z = z + cis * abar.step_length()
            step_cert = replace(step_cert, index=index, segment=segment_index, z_end=z)
            logger.info("Step %d [%r, %r]: delta=%.3e rho=%.3e eps=%.3e W_h=%.4g", index,
                        step_cert.t_lo, step_cert.t_hi, step_cert.delta.upper(), step_cert.rho.upper(),
                        step_cert.eps_out.upper(), step_cert.W_h.upper())
            pending = _Pending(step_cert, abar)

            endpoint = cheb.eval_at_end(abar)
            if stop_when is not None and stop_when(step_cert, endpoint):
                finalize(RealInterval.zeros())
                return certificates
            t = abar.t_hi
            u_mid = endpoint.mid()

    if pending is not None:
        finalize(RealInterval.zeros())
    return certificates

# END of: run_contour()
