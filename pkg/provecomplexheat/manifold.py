'''
################
Global existence by a trapping region around the center-stable manifold of 0.

* The state is split into the k = 0 mode x_c and the rest x_s.  With
  mu = omega^2 cos(theta), radii r_c, r_s and a Lipschitz constant rho:
      delta1 = 2 r_c + (1 + 2 rho) r_s
      delta2 = 2 r_c + 2 (1 + rho) r_s
      delta3 = 2 (rho (r_c + rho r_s) + r_s)
      delta4 = 2 (r_c + 2 rho r_s + r_s)
      lambda = 2 delta3 r_s / ((mu - delta1)(mu - delta4)) + 2 (r_c + rho r_s) / (mu - delta1)
  The hypotheses are delta1, delta2, delta4 < mu, delta3/(mu - delta2) < rho
  and lambda < 1.
* When they hold, every state with rho ||x_s|| < dist(x_c, boundary of B_c)
  lies on the manifold, and the solution exists globally and tends to 0.
  B_c is the disc |x_c| <= r_c cut by the half-plane Re(e^{i theta} x_c) <= 0.

MIT License, Copyright (c) 2021-present Jim Yuill
################
'''

import logging
from dataclasses import dataclass, replace
from typing import Optional

import interval_core as ic
from interval_core import RealInterval
import fourier_space as fs
import evolution
from proof_errors import NoFeasibleRhoError

logger = logging.getLogger(__name__)

DEFAULT_CENTER_RADIUS_INFLATION = "0.02"
DEFAULT_RHO_INFLATION = "0.05"


@dataclass(frozen=True)
class ManifoldCertificate:
    theta_over_pi: object
    mu: RealInterval
    r_c: RealInterval
    r_s: RealInterval
    rho: Optional[RealInterval]
    delta1: Optional[RealInterval] = None
    delta2: Optional[RealInterval] = None
    delta3: Optional[RealInterval] = None
    delta4: Optional[RealInterval] = None
    lam: Optional[RealInterval] = None
    lam_factored: Optional[RealInterval] = None
    flags: tuple = ()
    distance: Optional[RealInterval] = None
    membership: Optional[bool] = None
    step_index: int = 0
    t: float = 0.0

    @property
    def hypotheses_hold(self):
        return bool(self.flags) and all(ok for _, ok in self.flags)

    @property
    def passed(self):
        return self.hypotheses_hold and self.membership is True


def mu_center(theta_over_pi):
    '''mu = omega^2 cos(theta), the decay rate of the slowest nonzero mode.'''
    return evolution.mu_interval(0, theta_over_pi)


def _point_upper(value):
    return RealInterval(ic.as_real(value).upper())


def choose_rho(mu, r_c, r_s, inflation=DEFAULT_RHO_INFLATION):
    '''
    A point rho slightly above the lower root of
        rho^2 - b rho + 1/2 = 0,   b = (mu - 4 r_c - 2 r_s) / (4 r_s),
    the boundary of delta3 < rho (mu - delta2).  The lower root is computed as
    1 / (b + sqrt(b^2 - 2)).  The hypothesis is re-verified at the returned rho.
    '''
    mu, r_c, r_s = ic.as_real(mu), ic.as_real(r_c), ic.as_real(r_s)
    diagnostics = {"mu": mu.lower(), "r_c": r_c.upper(), "r_s": r_s.upper()}
    if not r_s.lower() > 0:
        raise NoFeasibleRhoError("choose_rho() needs r_s > 0", diagnostics)
    b = (mu - 4 * r_c - 2 * r_s) / (4 * r_s)
    if not b.lower() > 0:
        raise NoFeasibleRhoError("mu <= 4 r_c + 2 r_s: no rho is feasible", diagnostics)
    discriminant = b.sqr() - 2
    if not discriminant.lower() > 0:
        raise NoFeasibleRhoError("Negative discriminant: no rho is feasible",
                                 dict(diagnostics, discriminant_lo=discriminant.lower()))
    root = 1 / (b + discriminant.sqrt())
    rho = _point_upper(root * (1 + ic.as_real(inflation)))
    constants = hypothesis_constants(mu, r_c, r_s, rho)
    ok = dict(_flags(mu, rho, constants))["delta3_ratio_below_rho"]
    if not ok:
        raise NoFeasibleRhoError("delta3/(mu - delta2) < rho does not hold at the chosen rho",
                                 dict(diagnostics, rho=rho.upper()))
    return rho


def hypothesis_constants(mu, r_c, r_s, rho):
    '''(delta1, delta2, delta3, delta4, lam, lam_factored); the lambdas are None when mu <= delta1 or delta4.'''
    mu, r_c, r_s, rho = (ic.as_real(v) for v in (mu, r_c, r_s, rho))
    delta1 = 2 * r_c + (1 + 2 * rho) * r_s
    delta2 = 2 * r_c + 2 * (1 + rho) * r_s
    delta3 = 2 * (rho * (r_c + rho * r_s) + r_s)
    delta4 = 2 * (r_c + 2 * rho * r_s + r_s)
    gap1, gap4 = mu - delta1, mu - delta4
    lam = lam_factored = None
    if gap1.lower() > 0 and gap4.lower() > 0:
        lam = delta3 * 2 * r_s / (gap1 * gap4) + 2 * (r_c + rho * r_s) / gap1
        lam_factored = lambda_factored(gap1, gap4, r_c, r_s, rho)
    return delta1, delta2, delta3, delta4, lam, lam_factored


def lambda_factored(gap1, gap4, r_c, r_s, rho):
    '''lambda with the product expanded: 4 r_s (rho (r_c + rho r_s) + r_s) / (gap1 gap4) + ...'''
    numerator = 4 * r_s * (rho * r_c + rho.sqr() * r_s + r_s)
    return numerator / (gap1 * gap4) + (2 * r_c + 2 * rho * r_s) / gap1


def _flags(mu, rho, constants):
    delta1, delta2, delta3, delta4, lam, _ = constants
    gap2 = mu - delta2
    ratio_ok = gap2.lower() > 0 and (delta3 / gap2).upper() < ic.as_real(rho).lower()
    return (
        ("delta1_below_mu", delta1.upper() < mu.lower()),
        ("delta2_below_mu", delta2.upper() < mu.lower()),
        ("delta4_below_mu", delta4.upper() < mu.lower()),
        ("delta3_ratio_below_rho", bool(ratio_ok)),
        ("lambda_below_one", lam is not None and lam.upper() < 1.0),
    )


def hypothesis_check(theta_over_pi, r_c, r_s, rho):
    mu = mu_center(theta_over_pi)
    r_c, r_s, rho = ic.as_real(r_c), ic.as_real(r_s), ic.as_real(rho)
    constants = hypothesis_constants(mu, r_c, r_s, rho)
    delta1, delta2, delta3, delta4, lam, lam_factored = constants
    return ManifoldCertificate(theta_over_pi, mu, r_c, r_s, rho, delta1, delta2, delta3, delta4,
                               lam, lam_factored, _flags(mu, rho, constants))


def hypothesis_table(rows):
    '''hypothesis_check() for each (theta_over_pi, r_c, r_s, rho) row; reals may be decimal strings.'''
    return [hypothesis_check(theta_over_pi, r_c, r_s, rho) for theta_over_pi, r_c, r_s, rho in rows]


def trapping_radii(endpoint, eps, center_inflation=DEFAULT_CENTER_RADIUS_INFLATION):
    '''
    r_c = (|a_0| + eps) + iota (||a_s|| + eps) and r_s = ||a_s|| + eps, for the
    state enclosure endpoint with error eps.  Returned as point intervals.
    '''
    eps = ic.as_real(eps)
    center = endpoint.coefficient(0).abs() + eps
    stable = fs.ell1_norm(fs.strip_zero_mode(endpoint)) + eps
    r_c = _point_upper(center + ic.as_real(center_inflation) * stable)
    r_s = _point_upper(stable)
    return r_c, r_s


def boundary_distance(endpoint, eps, theta_over_pi, r_c):
    '''
    Lower bound of dist(x_c, boundary of B_c) over every x_c within eps of a_0:
    min(r_c - |a_0| - eps, -Re(e^{i theta} a_0) - eps).
    '''
    eps = ic.as_real(eps)
    a0 = endpoint.coefficient(0)
    to_circle = ic.as_real(r_c) - (a0.abs() + eps)
    to_half_plane = -((a0 * ic.cis_interval(theta_over_pi)).re + eps)
    return to_circle.min_with(to_half_plane)


def trapping_membership(endpoint, eps, theta_over_pi,
                        center_inflation=DEFAULT_CENTER_RADIUS_INFLATION,
                        rho_inflation=DEFAULT_RHO_INFLATION):
    '''
    Build r_c and r_s from the state, pick rho, check the hypotheses and test
    rho r_s < dist(x_c, boundary of B_c).  A failed test is a negative
    certificate, not an error.
    '''
    mu = mu_center(theta_over_pi)
    r_c, r_s = trapping_radii(endpoint, eps, center_inflation)
    try:
        rho = choose_rho(mu, r_c, r_s, rho_inflation)
    except NoFeasibleRhoError as err:
        logger.debug("No feasible rho: %s", err)
        return ManifoldCertificate(theta_over_pi, mu, r_c, r_s, None,
                                   flags=(("rho_feasible", False),), membership=False)
    certificate = hypothesis_check(theta_over_pi, r_c, r_s, rho)
    distance = boundary_distance(endpoint, eps, theta_over_pi, r_c)
    inside = distance.lower() > 0 and (rho * r_s).upper() < distance.lower()
    return replace(certificate, distance=distance, membership=bool(inside))
