from fractions import Fraction

import mpmath
import numpy as np
import pytest

import fourier_space as fs
import interval_core as ic
from fourier_space import FourierVec

SEQUENCES = 1000


def random_vec(rng, N, scale=1.0):
    values = rng.normal(scale=scale, size=2 * N + 1) + 1j * rng.normal(scale=scale, size=2 * N + 1)
    return FourierVec.from_complex(values)


def test_from_modes_places_coefficients_by_wavenumber():
    a = FourierVec.from_modes({0: ("50", "0"), 1: ("-25", "0"), -1: ("-25", "0")})
    assert a.N == 1
    assert a.coefficient(0).re.lower() == 50.0
    assert a.coefficient(-1).re.upper() == -25.0
    assert a.coefficient(5).is_exact_zero()


def test_from_modes_rejects_wavenumbers_outside_the_support():
    with pytest.raises(ValueError):
        FourierVec.from_modes({3: ("1", "0")}, N=2)


def test_pad_and_truncate_keep_the_sequence():
    a = FourierVec.from_modes({0: ("1", "0"), 2: ("0", "3")})
    padded = a.pad(5)
    assert padded.N == 5
    assert padded.coefficient(2).im.lower() == 3.0
    assert padded.truncate(2).N == 2
    assert padded.truncate(1).coefficient(2).is_exact_zero()
    with pytest.raises(ValueError):
        padded.pad(3)


def test_convolution_contains_exact_convolution(rng):
    a = rng.integers(-9, 10, size=7) + 1j * rng.integers(-9, 10, size=7)
    b = rng.uniform(-1, 1, size=5) + 1j * rng.uniform(-1, 1, size=5)
    product = fs.convolve(FourierVec.from_complex(a), FourierVec.from_complex(b))
    assert product.N == 3 + 2
    for k in range(11):
        exact_re = Fraction(0)
        exact_im = Fraction(0)
        for j in range(5):
            if 0 <= k - j < 7:
                p, q = a[k - j], b[j]
                exact_re += Fraction(p.real) * Fraction(q.real) - Fraction(p.imag) * Fraction(q.imag)
                exact_im += Fraction(p.real) * Fraction(q.imag) + Fraction(p.imag) * Fraction(q.real)
        entry = product.coeffs[k]
        assert Fraction(entry.re.lower()) <= exact_re <= Fraction(entry.re.upper())
        assert Fraction(entry.im.lower()) <= exact_im <= Fraction(entry.im.upper())


def test_convolution_with_delta_is_identity(rng):
    a = random_vec(rng, 4)
    delta = FourierVec.from_modes({0: ("1", "0")})
    product = fs.convolve(a, delta)
    assert np.allclose(product.mid(), a.mid(), rtol=0, atol=1e-15)


def test_ell1_is_a_banach_algebra_norm(rng):
    for _ in range(SEQUENCES):
        a = random_vec(rng, 3, scale=rng.uniform(0.1, 10))
        b = random_vec(rng, 2, scale=rng.uniform(0.1, 10))
        lhs = fs.ell1_norm(fs.convolve(a, b))
        assert lhs.lower() <= (fs.ell1_norm(a) * fs.ell1_norm(b)).upper()


def test_project_split_tail_norm(rng):
    a = random_vec(rng, 6)
    split = fs.project_split(a, 2)
    assert split.finite.N == 2
    values = a.mid()
    tail = np.abs(values[:4]).sum() + np.abs(values[-4:]).sum()
    assert split.tail_norm.lower() <= tail * (1 + 1e-14)
    assert split.tail_norm.upper() >= tail * (1 - 1e-14)
    assert fs.project_split(a, 6).tail_norm.upper() == 0.0


def test_strip_zero_mode_only_touches_k_zero(rng):
    a = random_vec(rng, 3)
    stripped = fs.strip_zero_mode(a)
    assert stripped.coefficient(0).is_exact_zero()
    for k in (-3, -1, 2):
        assert stripped.coefficient(k).re.lower() == a.coefficient(k).re.lower()


def test_laplacian_symbol_is_minus_k_squared_omega_squared():
    omega = ic.omega_interval()
    symbol = fs.laplacian_symbol(2, omega)
    expected = -np.array([4, 1, 0, 1, 4]) * (2 * np.pi) ** 2
    assert np.all(symbol.lo <= expected * (1 - 1e-15) + 1e-12)
    assert np.all(symbol.hi >= expected * (1 + 1e-15) - 1e-12)
    assert symbol.lo[2] == symbol.hi[2] == 0.0

    a = FourierVec.from_modes({1: ("1", "0")})
    La = fs.apply_laplacian(a, omega)
    exact = -4 * (+mpmath.mp.pi) ** 2
    assert La.coefficient(1).re.lower() <= exact <= La.coefficient(1).re.upper()
    assert La.coefficient(0).is_exact_zero()


def test_operations_on_different_supports_pad_first():
    a = FourierVec.from_modes({0: ("1", "0")})
    b = FourierVec.from_modes({2: ("0", "1")})
    total = a + b
    assert total.N == 2
    assert total.coefficient(0).re.lower() == 1.0
    assert (total - b).coefficient(2).contains(0j)
