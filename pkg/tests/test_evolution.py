from dataclasses import replace
from fractions import Fraction

import mpmath
import numpy as np
import pytest

import evolution
from cheb_time import ChebFourier
from interval_core import RealInterval
from proof_errors import ConfigError, TailCouplingFailure

H = 0.0025


def constant_series(values, t_hi=H):
    '''A ChebFourier constant in time, with the given Fourier coefficients.'''
    return ChebFourier.from_complex(0.0, t_hi, np.array([values], dtype=np.complex128))


def hand_constants(W_m, abar_s_norm, W_inf="0.1", W_inf_bar="0.01", W_sup=1.0):
    W_inf = RealInterval.from_decimal(W_inf)
    W_inf_bar = RealInterval.from_decimal(W_inf_bar)
    s = RealInterval(abar_s_norm)
    kappa = evolution.kappa_value(W_m, W_inf_bar, s)
    return evolution.TailConstants(mu=RealInterval(20.0), growth_rate=RealInterval(-1.0), W_inf=W_inf,
                                   W_inf_bar=W_inf_bar, W_sup=RealInterval(W_sup), W_end=RealInterval(W_sup),
                                   kappa=kappa, abar_norm=s, abar_s_norm=s, h=RealInterval(0.1))


def test_block_norm_is_the_larger_column_sum():
    norm = evolution.block_norm1(RealInterval(1.0), RealInterval(2.0), RealInterval(3.0), RealInterval(4.0))
    assert norm.lower() <= 6.0 <= norm.upper()


def test_mu_encloses_its_formula():
    mpmath.mp.dps = 30
    mu = evolution.mu_interval(0, Fraction(1, 3))
    assert mu.lower() <= 2 * (+mpmath.mp.pi) ** 2 <= mu.upper()
    mu = evolution.mu_interval(2, Fraction(-1, 4))
    exact = 9 * 4 * (+mpmath.mp.pi) ** 2 * mpmath.cos(mpmath.mp.pi / 4)
    assert mu.lower() <= exact <= mu.upper()


def test_mu_needs_positive_cosine():
    with pytest.raises(ConfigError):
        evolution.mu_interval(0, Fraction(1, 2))


def test_zero_approximation_gives_pure_heat_constants():
    tc = evolution.tail_constants(ChebFourier.zeros(0.0, H, 3, 2), 0, Fraction(1, 3), 1.0)
    mpmath.mp.dps = 30
    mu = 2 * (+mpmath.mp.pi) ** 2
    assert tc.W_inf.lower() <= (1 - mpmath.exp(-mu * H)) / mu <= tc.W_inf.upper()
    assert tc.W_sup.lower() == tc.W_sup.upper() == 1.0
    assert tc.kappa.lower() == tc.kappa.upper() == 1.0


def test_W_inf_for_a_given_norm():
    tc = evolution.tail_constants(constant_series([15.0]), 0, Fraction(1, 3), 1.0)
    mpmath.mp.dps = 30
    assert tc.growth_rate.lower() == tc.growth_rate.upper() >= 30 - 2 * (+mpmath.mp.pi) ** 2
    x = mpmath.mpf(tc.growth_rate.upper())
    h = mpmath.mpf(H)
    assert tc.W_inf.lower() <= mpmath.expm1(x * h) / x <= tc.W_inf.upper()
    assert tc.W_inf.width() < 1e-15
    assert tc.W_inf.upper() == pytest.approx(2.533e-3, abs=2e-6)
    assert tc.W_end.lower() <= mpmath.exp(x * h) <= tc.W_end.upper()
    assert tc.W_sup.upper() >= tc.W_end.upper()


def test_tail_constants_stay_tight_for_the_cosine_datum():
    # ||abar|| = 100 and ||abar^(s)|| = 50 at theta = pi/4, m = 2
    tc = evolution.tail_constants(constant_series([-25.0, 50.0, -25.0]), 2, Fraction(1, 4), 2.03)
    mpmath.mp.dps = 30
    x = mpmath.mpf(tc.growth_rate.upper())
    h = mpmath.mpf(H)
    assert x >= 200 - 36 * (+mpmath.mp.pi) ** 2 * mpmath.cos(mpmath.mp.pi / 4)
    exact = (mpmath.expm1(x * h) - x * h) / x ** 2
    assert tc.W_inf_bar.lower() <= exact <= tc.W_inf_bar.upper()
    assert tc.W_inf_bar.upper() < 3.1e-6
    assert tc.W_inf_bar.width() < 1e-17
    assert tc.kappa.lower() > 0.9


def test_assemble_Wh_hand_example():
    tc = hand_constants(1.0, 1.0)
    assert tc.kappa.lower() <= 0.96 <= tc.kappa.upper()
    bound = evolution.assemble_Wh(1.0, tc)
    (e11, e12), (e21, e22) = bound.entries
    assert e11.lower() <= 1 / 0.96 <= e11.upper()
    assert e12.lower() <= 0.2 / 0.96 <= e12.upper()
    assert e22.lower() <= 1 + 0.04 / 0.96 <= e22.upper()
    assert bound.W_h.lower() <= 1.25 <= bound.W_h.upper()


@pytest.mark.parametrize("W_m, W_sup", [(1.3, 1.0), (0.8, 1.1)])
def test_Wh_without_nonzero_modes_is_the_larger_diagonal(W_m, W_sup):
    tc = hand_constants(W_m, 0.0, W_sup=W_sup)
    bound = evolution.assemble_Wh(W_m, tc)
    assert bound.W_h.upper() == pytest.approx(max(W_m, W_sup), rel=1e-14)


def test_Wh_grows_with_the_nonzero_modes():
    values = [evolution.assemble_Wh(1.2, hand_constants(1.2, s)).W_h.upper() for s in (0.0, 0.5, 1.0, 1.5)]
    assert values == sorted(values)


def test_large_Wm_breaks_the_tail_coupling():
    with pytest.raises(TailCouplingFailure) as excinfo:
        evolution.tail_constants(constant_series([-25.0, 50.0, -25.0]), 0, Fraction(0), 1e6)
    assert excinfo.value.diagnostics["kappa_lo"] <= 0


def test_assemble_Wh_refuses_nonpositive_kappa():
    tc = hand_constants(1.0, 1.0)
    tc = replace(tc, kappa=RealInterval(-0.5, 0.1))
    with pytest.raises(TailCouplingFailure):
        evolution.assemble_Wh(1.0, tc)


def test_tail_inequalities_hold_at_sampled_times():
    abar = constant_series([-25.0, 50.0, -25.0])
    for m in (0, 2):
        tc = evolution.tail_constants(abar, m, Fraction(1, 4), 1.5)
        report = evolution.lemma_bounds_check(tc, samples=50)
        assert report.samples == 50
        assert report.passed, report.violations


def test_tail_check_reports_a_wrong_constant():
    tc = evolution.tail_constants(constant_series([-25.0, 50.0, -25.0]), 1, Fraction(0), 1.0)
    report = evolution.lemma_bounds_check(replace(tc, W_inf=RealInterval(1e-9)), samples=20)
    assert not report.passed
    assert {violation["constant"] for violation in report.violations} == {"W_inf"}


TAIL_PARAMETER_SETS = 20
TAIL_SAMPLES = 50


def tail_parameters(seed):
    '''(abar norm bound, m, theta/pi, h) and a norm profile g(q) <= bound with its antiderivative.'''
    rng = np.random.default_rng(seed)
    bound = float(rng.uniform(0.0, 60.0))
    m = int(rng.integers(0, 3))
    theta_over_pi = [Fraction(0), Fraction(1, 12), Fraction(1, 4), Fraction(1, 3), Fraction(-1, 6)][seed % 5]
    h = float(rng.uniform(1e-4, 0.01))
    depth, beta, phase = rng.uniform(0.0, 1.0), rng.uniform(1.0, 2000.0), rng.uniform(0.0, 6.0)

    def G(q):
        # int_0^q bound (1 - depth sin^2(beta r + phase)) dr
        return bound * ((1 - depth / 2) * q
                        + depth / (4 * beta) * (mpmath.sin(2 * beta * q + 2 * phase) - mpmath.sin(2 * phase)))

    return bound, m, theta_over_pi, h, G


@pytest.mark.parametrize("seed", range(TAIL_PARAMETER_SETS))
def test_tail_constants_bound_quadrature_of_the_tail_evolution(seed):
    bound, m, theta_over_pi, h, G = tail_parameters(seed)
    tc = evolution.tail_constants(constant_series([bound], t_hi=h), m, theta_over_pi, 1.0)
    mpmath.mp.dps = 20
    mu = mpmath.mpf(evolution.mu_interval(m, theta_over_pi).lower())

    def W(t, s):
        return mpmath.exp(-mu * (t - s) + 2 * (G(t) - G(s)))

    rng = np.random.default_rng(1000 + seed)
    pairs = [(0.0, h)] + [tuple(sorted(rng.uniform(0.0, h, 2))) for _ in range(TAIL_SAMPLES - 1)]
    slack = 1 + 1e-10
    for s, t in pairs:
        s, t = mpmath.mpf(s), mpmath.mpf(t)
        assert W(t, s) <= tc.W_sup.upper() * slack
        single = mpmath.quad(lambda r: W(t, r), [s, t])
        assert single <= tc.W_inf.upper() * slack
        # int_s^t int_r^t W(t,q) dq dr = int_s^t (q - s) W(t,q) dq
        double = mpmath.quad(lambda q: (q - s) * W(t, q), [s, t])
        assert double <= tc.W_inf_bar.upper() * slack
