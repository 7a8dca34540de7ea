from fractions import Fraction

import mpmath
import numpy as np
import pytest

import approx_solver
import cheb_time as cheb
import evolution
import stepper
from fourier_space import FourierVec
from interval_core import RealInterval
from proof_config import ContourSchedule, SegmentConfig, SolverSettings
from proof_errors import DomainMismatchError, RadiiFailure, StepFailure

COSINE_DATUM = {0: ("50", "0"), 1: ("-25", "0"), -1: ("-25", "0")}


def cosine_schedule(t_end=0.0075, theta_over_pi=Fraction(1, 3)):
    return ContourSchedule((SegmentConfig(theta_over_pi, 0.0, t_end, 0.0025, N=10, n=13, m=2),))


def zero_schedule(t_end=0.01, m=0):
    return ContourSchedule((SegmentConfig(Fraction(1, 3), 0.0, t_end, 0.0025, N=4, n=10, m=m),))


@pytest.fixture(scope="module")
def cosine_run():
    seen = []
    certificates = stepper.run_contour(FourierVec.from_modes(COSINE_DATUM), cosine_schedule(),
                                       on_certificate=seen.append)
    return certificates, seen


def test_propagate_endpoint_error_hand_example():
    eps = stepper.propagate_endpoint_error(1.1, 1.2, 1e-3, 0.01, 0.02, 1e-4, 1e-6)
    assert eps.lower() == 0.0
    assert eps.upper() >= 1.1e-3 + 1.2 * 0.01 * (2 * 0.02 ** 2 + 1e-4) + 1e-6
    assert eps.upper() == pytest.approx(0.0011118, rel=1e-12)


def test_endpoint_mismatch_needs_meeting_steps():
    first = cheb.ChebFourier.zeros(0.0, 0.01, 3, 1)
    gap = cheb.ChebFourier.zeros(0.02, 0.03, 3, 1)
    with pytest.raises(DomainMismatchError):
        stepper.endpoint_mismatch(first, gap)
    touching = cheb.ChebFourier.zeros(0.01, 0.02, 3, 1)
    assert stepper.endpoint_mismatch(first, touching).upper() == 0.0


def test_endpoint_bounds_without_nonzero_modes():
    tc = evolution.TailConstants(mu=RealInterval(20.0), growth_rate=RealInterval(-20.0),
                                 W_inf=RealInterval(0.01), W_inf_bar=RealInterval(1e-4),
                                 W_sup=RealInterval(1.0), W_end=RealInterval(0.9), kappa=RealInterval(1.0),
                                 abar_norm=RealInterval(0.0), abar_s_norm=RealInterval(0.0),
                                 h=RealInterval(0.01))
    W_J, W_t = stepper.endpoint_bounds(1.5, 2.0, tc, 3.0)
    assert W_J.lower() <= 3.0 <= W_J.upper()
    assert W_t.lower() <= 1.5 <= W_t.upper()


def test_validate_step_bounds_are_consistent():
    N = 10
    u0 = np.zeros(2 * N + 1, dtype=np.complex128)
    u0[N], u0[N - 1], u0[N + 1] = 50.0, -25.0, -25.0
    cfg = approx_solver.SolveConfig(N=N, n=13, theta_over_pi=Fraction(1, 4), t_lo=0.0, t_hi=0.0025)
    abar = approx_solver.solve_step(u0, cfg)
    cert = stepper.validate_step(abar, RealInterval(0.0, 1e-12), Fraction(1, 4), 2, 13, 1.5)
    assert cert.inclusion.success
    assert cert.rho.upper() < 1e-3
    assert cert.eps_hat.upper() == 0.0
    assert cert.W_h.upper() >= cert.tail.W_sup.upper()
    assert cert.eps_out.upper() >= cert.eps_in.upper() * cert.W_t.lower() * (1 - 1e-12)
    assert cert.phi.label == "Phi" and cert.psi.label == "Psi"
    assert len(cert.phi.radii) == 5


def test_contour_run_chains_the_error(cosine_run):
    certificates, seen = cosine_run
    assert [c.index for c in certificates] == [1, 2, 3]
    assert len(seen) == 3 and all(a is b for a, b in zip(seen, certificates))
    for previous, current in zip(certificates[:-1], certificates[1:]):
        assert current.t_lo == previous.t_hi
        assert current.eps_in.upper() == previous.eps_out.upper()
        replayed = stepper.propagate_endpoint_error(previous.W_t, previous.W_J, previous.eps_in, previous.h,
                                                    previous.rho, previous.delta, previous.eps_hat)
        assert replayed.upper() == previous.eps_out.upper()
    assert certificates[-1].eps_hat.upper() == 0.0
    assert certificates[-1].t_hi == 0.0075


def test_contour_position_follows_the_angle(cosine_run):
    certificates, _ = cosine_run
    z = certificates[-1].z_end
    mpmath.mp.dps = 30
    length = mpmath.mpf(0.0075)
    assert z.re.lower() <= length * mpmath.cos(mpmath.mp.pi / 3) <= z.re.upper()
    assert z.im.lower() <= length * mpmath.sin(mpmath.mp.pi / 3) <= z.im.upper()


def test_max_steps_and_stop_when_end_the_run_early():
    datum = FourierVec.from_modes(COSINE_DATUM)
    assert len(stepper.run_contour(datum, cosine_schedule(), max_steps=1)) == 1
    stopped = stepper.run_contour(datum, cosine_schedule(), stop_when=lambda cert, endpoint: cert.index == 2)
    assert [c.index for c in stopped] == [1, 2]
    assert stopped[-1].eps_hat.upper() == 0.0


def test_zero_datum_runs_to_the_segment_end():
    certificates = stepper.run_contour(FourierVec.zeros(4), zero_schedule())
    assert len(certificates) == 4
    assert certificates[-1].t_hi == 0.01
    assert all(c.eps_out.upper() == 0.0 for c in certificates)


def test_retry_policy_halves_then_raises_m(monkeypatch):
    attempts = []

    def failing_step(abar, eps_in, theta_over_pi, m, n_columns, nu, solver):
        attempts.append((abar.t_hi - abar.t_lo, m))
        raise RadiiFailure("forced", {"Z0": 0.5, "Z1": 0.6})

    monkeypatch.setattr(stepper, "validate_step", failing_step)
    with pytest.raises(StepFailure) as excinfo:
        stepper.run_contour(FourierVec.zeros(4), zero_schedule(), solver=SolverSettings(max_halvings=2))
    assert [m for _, m in attempts] == [0, 0, 0, 2]
    assert [h for h, _ in attempts] == pytest.approx([0.0025, 0.00125, 0.000625, 0.0025])
    assert excinfo.value.step_index == 1
    assert excinfo.value.failing_bound == "RadiiFailure"
    assert excinfo.value.certificates == []
    assert excinfo.value.diagnostics["Z1"] == 0.6


def test_a_halved_step_is_kept_for_the_rest_of_the_segment(monkeypatch):
    real_step = stepper.validate_step
    calls = []

    def fail_once(abar, *args):
        calls.append(abar.t_hi - abar.t_lo)
        if len(calls) == 1:
            raise RadiiFailure("forced")
        return real_step(abar, *args)

    monkeypatch.setattr(stepper, "validate_step", fail_once)
    certificates = stepper.run_contour(FourierVec.zeros(4), zero_schedule(t_end=0.005))
    assert len(certificates) == 4
    assert all(c.t_hi - c.t_lo == pytest.approx(0.00125) for c in certificates)


def test_raised_projection_order_is_skipped_above_the_fourier_order(monkeypatch):
    attempts = []

    def failing_step(abar, eps_in, theta_over_pi, m, n_columns, nu, solver):
        attempts.append(m)
        raise RadiiFailure("forced")

    monkeypatch.setattr(stepper, "validate_step", failing_step)
    with pytest.raises(StepFailure):
        stepper.run_contour(FourierVec.zeros(4), zero_schedule(m=4), solver=SolverSettings(max_halvings=1))
    assert attempts == [4, 4]
