'''
################
Replay verification of a certificate directory.

Every inequality a proof rests on is re-evaluated from the constants stored in
the certificates, without integrating anything:
* Phi and Psi: Z0 + Z1 < 1 and every radius >= Y0 / (1 - Z0 - Z1)
* tail constants recomputed from mu, ||abar||, W_m and h; kappa > 0
* W_h, W_J and W_t recomputed from their inputs
* f_eps(rho) <= rho and 2 W_h h rho < 1
* the error chain: eps_in of step i is eps_out of step i-1, and eps_out
  recomputed from the stored constants is not above the stored value
* the manifold certificate: hypotheses recomputed from (theta, r_c, r_s, rho)
  and rho r_s < dist(x_c, boundary of B_c)
* a proved branching verdict: positive imaginary margin and t_lower < Re z_C

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
from dataclasses import dataclass, field

import interval_core as ic
import certificates as records
import evolution
import inclusion
import manifold
import stepper
from proof_errors import ProofError

logger = logging.getLogger(__name__)


@dataclass
class ReplayReport:
    '''checks: (step index, check name, passed) triples; step 0 is the run level.'''
    checks: list = field(default_factory=list)

    def record(self, index, name, passed):
        self.checks.append((index, name, bool(passed)))
        if not passed:
            logger.error("Replay check failed: step %d, %s", index, name)

    @property
    def failures(self):
        return [(index, name) for index, name, passed in self.checks if not passed]

    @property
    def passed(self):
        return bool(self.checks) and not self.failures


def _not_above(recomputed, stored):
    return recomputed.upper() <= stored.upper()


def check_matrix(report, index, summary):
    Z = summary.Z0 + summary.Z1
    report.record(index, "%s Z0 + Z1 < 1" % summary.label, Z.upper() < 1.0)
    if Z.upper() < 1.0:
        gap = 1 - Z
        report.record(index, "%s radii >= Y0 / (1 - Z0 - Z1)" % summary.label,
                      all(radius >= (Y0 / gap).upper() for Y0, radius in zip(summary.Y0, summary.radii)))


def check_tail(report, index, certificate):
    tc = certificate.tail
    mu = evolution.mu_interval(certificate.m, certificate.theta_over_pi)
    x_hi = evolution.growth_rate_bound(tc.abar_norm, mu)
    report.record(index, "growth rate", _not_above(x_hi, tc.growth_rate))
    report.record(index, "W_inf", _not_above(ic.expm1_div(tc.growth_rate, tc.h), tc.W_inf))
    report.record(index, "W_inf_bar", _not_above(ic.expm1_div2(tc.growth_rate, tc.h), tc.W_inf_bar))
    W_end = ic.exp_real_upper(tc.growth_rate * tc.h)
    report.record(index, "W_end", _not_above(W_end, tc.W_end))
    report.record(index, "W_sup", _not_above(W_end.max_with(1.0), tc.W_sup))
    kappa = evolution.kappa_value(certificate.W_m, tc.W_inf_bar, tc.abar_s_norm)
    report.record(index, "kappa > 0", kappa.lower() > 0 and tc.kappa.lower() > 0)


def check_bounds(report, index, certificate):
    tc = certificate.tail
    bound = evolution.assemble_Wh(certificate.W_m, tc)
    report.record(index, "W_h", _not_above(bound.W_h, certificate.W_h))
    W_J, W_t = stepper.endpoint_bounds(certificate.phi_end_norm, certificate.psi_sup_norm,
                                       tc, certificate.W_m)
    report.record(index, "W_J", _not_above(W_J, certificate.W_J))
    report.record(index, "W_t", _not_above(W_t, certificate.W_t))

    result = certificate.inclusion
    rho = certificate.rho
    report.record(index, "defect split", _not_above(certificate.defect.finite + certificate.defect.tail,
                                                    certificate.delta))
    f_value = inclusion.f_epsilon(rho, certificate.eps_in, certificate.delta, certificate.W_h, tc.h)
    report.record(index, "f_eps(rho) <= rho", f_value.upper() <= rho.upper())
    report.record(index, "2 W_h h rho < 1", (2 * certificate.W_h * tc.h * rho).upper() < 1.0)
    report.record(index, "inclusion inputs", result.eps.upper() == certificate.eps_in.upper()
                  and result.W_h.upper() == certificate.W_h.upper())


def check_error_chain(report, certificates):
    previous = None
    for certificate in certificates:
        index = certificate.index
        if previous is not None:
            report.record(index, "step order", index == previous.index + 1)
            report.record(index, "steps meet", certificate.t_lo == previous.t_hi)
            report.record(index, "eps_in = previous eps_out",
                          certificate.eps_in.upper() == previous.eps_out.upper())
        eps_out = stepper.propagate_endpoint_error(certificate.W_t, certificate.W_J, certificate.eps_in,
                                                   certificate.h, certificate.rho, certificate.delta,
                                                   certificate.eps_hat)
        report.record(index, "eps_out", _not_above(eps_out, certificate.eps_out))
        previous = certificate


def check_manifold(report, trapped, certificates):
    index = trapped.step_index
    recomputed = manifold.hypothesis_check(trapped.theta_over_pi, trapped.r_c, trapped.r_s, trapped.rho)
    for (name, ok), (stored_name, stored_ok) in zip(recomputed.flags, trapped.flags):
        report.record(index, "manifold %s" % name, ok and stored_ok and name == stored_name)
    distance = trapped.distance
    report.record(index, "rho r_s < dist", distance is not None and distance.lower() > 0
                  and (trapped.rho * trapped.r_s).upper() < distance.lower())
    by_index = {c.index: c for c in certificates}
    if index in by_index:
        eps = by_index[index].eps_out
        report.record(index, "radii cover eps", trapped.r_s.upper() >= eps.upper()
                      and trapped.r_c.upper() >= eps.upper())


def check_branching(report, summary):
    details = records.decode(summary.get("details") or {})
    margin = details.get("imaginary_margin")
    z_C = details.get("z_C")
    t_lower = details.get("t_lower", 0.0)
    report.record(0, "imaginary margin > 0", margin is not None and margin.lower() > 0)
    report.record(0, "z_C on the real axis", z_C is not None and bool(z_C.im.contains(0.0)))
    report.record(0, "t_lower < Re z_C", z_C is not None and t_lower < z_C.re.lower())


def replay(certificates, trapped=None, summary=None):
    '''ReplayReport for loaded certificates.'''
    report = ReplayReport()
    for certificate in certificates:
        check_matrix(report, certificate.index, certificate.phi)
        check_matrix(report, certificate.index, certificate.psi)
        check_tail(report, certificate.index, certificate)
        check_bounds(report, certificate.index, certificate)
    check_error_chain(report, certificates)
    if trapped is not None:
        check_manifold(report, trapped, certificates)
    if summary is not None and summary.get("pipeline") == "branching" and summary.get("status") == "proved":
        check_branching(report, summary)
    return report


def verify_directory(directory):
    '''Load and replay every record of directory.  Raises ProofError when there is nothing to check.'''
    certificates = records.load_step_certificates(directory)
    trapped = records.load_manifold_certificate(directory)
    summary = records.load_summary(directory)
    zero_datum = bool(summary and (summary.get("details") or {}).get("zero_datum"))
    if not certificates and trapped is None and not zero_datum:
        raise ProofError("No certificates found in: %s" % directory)
    report = replay(certificates, trapped, summary)
    if zero_datum:
        report.record(0, "zero datum is the equilibrium", not certificates)
    logger.info("Replayed %d checks on %d steps: %d failed",
                len(report.checks), len(certificates), len(report.failures))
    return report
