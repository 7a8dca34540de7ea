'''
################
Proof pipelines built on stepper.run_contour().

* prove_contour():       integrate along the contour and report the chain.
* prove_branching():     integrate around the real axis along a bent contour and
                         show that u(z_C) is not real although z_C is.  The real
                         solution is real on the real axis, so its continuation
                         around the contour has a branching singularity on
                         (t_lower, z_C).
* prove_global():        integrate along z = t e^{i theta} until the state lies
                         in the trapping region of module manifold.
* blowup_lower_bound():  integrate in real time as long as the steps validate.

Each pipeline returns a ProofVerdict.  A failed step makes a verdict
inconclusive; configuration problems raise ConfigError.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

import interval_core as ic
from interval_core import ComplexInterval
import fourier_space as fs
from fourier_space import FourierVec
import manifold
import stepper
from proof_errors import ConfigError, StepFailure

logger = logging.getLogger(__name__)

STATUS_PROVED = "proved"
STATUS_COMPLETED = "completed"
STATUS_INCONCLUSIVE = "inconclusive"

EXIT_CODES = {STATUS_PROVED: 0, STATUS_COMPLETED: 0, STATUS_INCONCLUSIVE: 2}


@dataclass(frozen=True)
class ProofVerdict:
    pipeline: str
    status: str
    message: str
    certificates: tuple = ()
    manifold: Optional["manifold.ManifoldCertificate"] = None
    details: dict = field(default_factory=dict)
    failure: Optional[dict] = None

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]


def _failure_record(err):
    return {"error": type(err).__name__, "message": str(err), "step_index": err.step_index,
            "failing_bound": err.failing_bound, "diagnostics": err.diagnostics}


def contour_end(schedule):
    '''Enclosure of z at the end of the contour: sum over segments of (t_end - t_start) e^{i theta}.'''
    z = ComplexInterval.zeros()
    for segment in schedule.segments:
        length = ic.as_real(segment.t_end) - segment.t_start
        z = z + ic.cis_interval(segment.theta_over_pi) * length
    return z


def im_part_coefficients(endpoint):
    '''
    Fourier coefficients of Im u(x) for u(x) = sum_k a_k e^{i k omega x}:
        b_k = (Im a_k + Im a_{-k})/2 - i (Re a_k - Re a_{-k})/2.
    '''
    reflected = endpoint.coeffs[::-1]
    re = (endpoint.coeffs.im + reflected.im) * 0.5
    im = -((endpoint.coeffs.re - reflected.re) * 0.5)
    return FourierVec(ComplexInterval(re, im))


def imaginary_margin(endpoint, eps):
    '''||Im u|| - eps; a positive lower endpoint proves the true solution is not real.'''
    return fs.ell1_norm(im_part_coefficients(endpoint)) - ic.as_real(eps)


def _run(cfg, schedule, stop_when=None, on_certificate=None, max_steps=None):
    '''(certificates, failure record or None)'''
    try:
        certificates = stepper.run_contour(
            cfg.initial_vector(), schedule, cfg.solver, eps0=cfg.initial_error(),
            max_steps=max_steps, stop_when=stop_when, on_certificate=on_certificate)
        return certificates, None
    except StepFailure as err:
        logger.warning("Integration stopped at step %d: %s", err.step_index, err)
        return err.certificates, _failure_record(err)


def prove_contour(cfg, on_certificate=None):
    certificates, failure = _run(cfg, cfg.schedule, on_certificate=on_certificate, max_steps=cfg.max_steps)
    if failure is not None:
        return ProofVerdict(cfg.pipeline, STATUS_INCONCLUSIVE, "contour integration failed",
                            tuple(certificates), failure=failure)
    last = certificates[-1]
    return ProofVerdict(cfg.pipeline, STATUS_COMPLETED,
                        "validated %d steps to t = %r" % (len(certificates), last.t_hi),
                        tuple(certificates), details={"eps_end": last.eps_out})


def blowup_lower_bound(cfg, schedule=None, on_certificate=None):
    '''
    Real-time integration; details["t_lower"] is the end of the last validated
    step.  A failed step ends the run without making the verdict inconclusive.
    '''
    schedule = cfg.schedule if schedule is None else schedule
    if any(segment.theta_over_pi != 0 for segment in schedule.segments):
        raise ConfigError("The blow-up lower bound needs theta = 0 on every segment")
    if cfg.horizon is not None:
        schedule = schedule.truncated(cfg.horizon)
    certificates, failure = _run(cfg, schedule, on_certificate=on_certificate, max_steps=cfg.max_steps)
    t_lower = certificates[-1].t_hi if certificates else schedule.t_start
    logger.info("Real-time solution validated up to t = %r", t_lower)
    return ProofVerdict("blowup-bound", STATUS_COMPLETED,
                        "solution exists on [%r, %r]" % (schedule.t_start, t_lower),
                        tuple(certificates), details={"t_lower": t_lower}, failure=failure)


def prove_branching(cfg, on_certificate=None):
    z_C = contour_end(cfg.schedule)
    if not bool(z_C.im.contains(0.0)):
        raise ConfigError("The branching contour must end on the real axis",
                          {"im_z_lo": z_C.im.lower(), "im_z_hi": z_C.im.upper()})
    endpoints = []

    def keep_endpoint(certificate, endpoint):
        endpoints.append(endpoint)
        return False

    certificates, failure = _run(cfg, cfg.schedule, stop_when=keep_endpoint,
                                 on_certificate=on_certificate)
    if failure is not None or not certificates:
        return ProofVerdict(cfg.pipeline, STATUS_INCONCLUSIVE, "contour integration failed",
                            tuple(certificates), failure=failure)

    last = certificates[-1]
    margin = imaginary_margin(endpoints[-1], last.eps_out)
    t_lower = 0.0
    details = {"z_C": last.z_end, "eps_end": last.eps_out, "imaginary_margin": margin}
    if cfg.lower_bound_schedule is not None:
        lower = blowup_lower_bound(cfg, cfg.lower_bound_schedule)
        t_lower = lower.details["t_lower"]
        details["lower_bound_steps"] = len(lower.certificates)
    details["t_lower"] = t_lower

    logger.info("Im-part margin at z_C: [%.7g, %.7g]", margin.lower(), margin.upper())
    proved = margin.lower() > 0 and t_lower < last.z_end.re.lower()
    if proved:
        message = "branching singularity on the real axis in (%r, %r)" % (t_lower, last.z_end.re.upper())
        return ProofVerdict(cfg.pipeline, STATUS_PROVED, message, tuple(certificates), details=details)
    return ProofVerdict(cfg.pipeline, STATUS_INCONCLUSIVE, "the imaginary part is not provably nonzero",
                        tuple(certificates), details=details)


def _is_zero_datum(u0):
    return bool(np.all(u0.coeffs.is_exact_zero()))


def prove_global(cfg, on_certificate=None):
    '''
    Global existence along the contour: succeeds at the first validated state
    inside the trapping region.  The initial state is tested before any step.
    '''
    u0 = cfg.initial_vector()
    if _is_zero_datum(u0):
        return ProofVerdict(cfg.pipeline, STATUS_PROVED, "the zero datum is the equilibrium: global existence",
                            details={"t": cfg.schedule.t_start, "step_index": 0, "zero_datum": True})

    margins = cfg.margins
    first = cfg.schedule.segments[0]
    initial = manifold.trapping_membership(u0, cfg.initial_error(), first.theta_over_pi,
                                           margins.center_radius_inflation, margins.rho_inflation)
    if initial.passed:
        return ProofVerdict(cfg.pipeline, STATUS_PROVED, "initial state lies in the trapping region",
                            manifold=replace(initial, t=first.t_start), details={"step_index": 0})

    found = []

    def in_trapping_region(certificate, endpoint):
        result = manifold.trapping_membership(endpoint, certificate.eps_out, certificate.theta_over_pi,
                                              margins.center_radius_inflation, margins.rho_inflation)
        if result.passed:
            found.append(replace(result, step_index=certificate.index, t=certificate.t_hi))
            return True
        return False

    certificates, failure = _run(cfg, cfg.schedule, stop_when=in_trapping_region,
                                 on_certificate=on_certificate, max_steps=cfg.max_steps)
    if found:
        trapped = found[0]
        message = ("global existence on the contour: trapping region reached at step %d, t = %r"
                   % (trapped.step_index, trapped.t))
        return ProofVerdict(cfg.pipeline, STATUS_PROVED, message, tuple(certificates), manifold=trapped,
                            details={"step_index": trapped.step_index, "t": trapped.t})
    reason = "a step failed" if failure is not None else "max steps or contour end reached"
    return ProofVerdict(cfg.pipeline, STATUS_INCONCLUSIVE, "trapping region not reached: " + reason,
                        tuple(certificates), failure=failure)


PIPELINES = {
    "contour": prove_contour,
    "branching": prove_branching,
    "global": prove_global,
    "blowup-bound": blowup_lower_bound,
}


def run_pipeline(cfg, on_certificate=None):
    try:
        pipeline = PIPELINES[cfg.pipeline]
    except KeyError as err:
        raise ConfigError("Unknown pipeline: %r" % cfg.pipeline) from err
    return pipeline(cfg, on_certificate=on_certificate)
