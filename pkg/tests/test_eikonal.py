import math

import mpmath as mp
import pytest

from pathscatter import DomainError, Singular, SquareBarrier, UnsupportedPotentialError, Yukawa
from pathscatter.eikonal import (
    eikonal_amplitude,
    eikonal_amplitude_all_angle,
    eikonal_cross_section,
    eikonal_forward_im,
    eikonal_im_f_asymptotic,
    eikonal_sigma_asymptotic,
    singular_eikonal_sigma,
)


def rho_quad(pot, f):
    """``int_0^inf rho f(mY(rho)) d rho`` with mpmath."""
    mY = lambda r: pot.reduced_chord(float(r))
    if isinstance(pot, SquareBarrier):
        return mp.quad(lambda r: r * f(mY(r)), [0, pot.R])
    return mp.quad(lambda r: r * f(mY(r)), [0, 0.5, 1, 2, 5, 10, 40])


@pytest.mark.parametrize("pot,k", [(SquareBarrier(10.0), 2.0), (Yukawa(5.0), 3.0), (Yukawa(1.0), 0.5)])
def test_cross_section_against_quadrature(pot, k):
    ref = 8 * mp.pi * rho_quad(pot, lambda x: mp.sin(x / (2 * k)) ** 2)
    assert eikonal_cross_section(pot, k) == pytest.approx(float(ref), rel=1e-9)


@pytest.mark.parametrize("pot,k", [(SquareBarrier(10.0), 2.0), (Yukawa(5.0), 3.0)])
def test_forward_amplitude_against_quadrature(pot, k):
    ref = 1j * k * complex(rho_quad(pot, lambda x: 1 - mp.exp(-1j * x / k)))
    f = eikonal_amplitude(pot, k, 0.0)
    assert f == pytest.approx(ref, rel=1e-8)
    assert f.imag == pytest.approx(eikonal_forward_im(pot, k), rel=1e-9)


def test_off_forward_amplitude_against_quadrature():
    pot, k, th = SquareBarrier(6.0), 4.0, 0.3
    q = k * th
    g = lambda r: r * mp.besselj(0, q * r) * (1 - mp.exp(-1j * pot.reduced_chord(float(r)) / k))
    ref = 1j * k * complex(mp.quad(g, mp.linspace(0, 1, 6)))
    assert eikonal_amplitude(pot, k, th) == pytest.approx(ref, rel=1e-7)


@pytest.mark.parametrize("pot", [SquareBarrier(8.0), Yukawa(5.0), Yukawa(10.0), Singular(1.0, 3)])
@pytest.mark.parametrize("k", [0.5, 5.0, 100.0])
def test_optical_theorem_holds_by_construction(pot, k):
    # both sides come from different quadratures of 1 - cos and sin^2
    lhs = eikonal_cross_section(pot, k) * k
    rhs = 4 * math.pi * eikonal_forward_im(pot, k)
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_im_f_is_nonnegative():
    for k in (0.05, 0.3, 3.0, 30.0):
        assert eikonal_forward_im(Yukawa(15.0), k) >= 0


@pytest.mark.parametrize("pot", [SquareBarrier(3.0), Yukawa(2.0)])
def test_high_energy_asymptotics(pot):
    k = 400.0
    assert eikonal_cross_section(pot, k) == pytest.approx(eikonal_sigma_asymptotic(pot, k), rel=1e-2)
    assert eikonal_forward_im(pot, k) == pytest.approx(eikonal_im_f_asymptotic(pot, k), rel=1e-2)


def test_square_asymptotic_closed_form():
    # int rho (G L)^2 d rho over the disc = G^2 R^4 / 4
    G, R = 3.0, 1.5
    assert eikonal_sigma_asymptotic(SquareBarrier(G, R), 1.0) == pytest.approx(2 * math.pi * G * G * R**4 / 4, rel=1e-10)


@pytest.mark.parametrize("G,N,k", [(1.0, 2, 1.0), (2.0, 3, 0.3), (0.5, 5, 4.0), (1.0, 40, 1.0)])
def test_singular_closed_form_against_quadrature(G, N, k):
    assert singular_eikonal_sigma(G, N, k) == pytest.approx(eikonal_cross_section(Singular(G, N), k), rel=1e-8)


def test_singular_sigma_large_exponent():
    # the profile becomes a black disc of radius one
    assert singular_eikonal_sigma(1.0, 200, 1.0) / (2 * math.pi) == pytest.approx(1.0, abs=0.01)


def test_singular_off_forward_against_quadrature():
    pot, k, th = Singular(1.0, 2), 2.0, 0.4
    A = pot.reduced_chord(1.0) / k
    p = 3
    q = k * th
    g = lambda r: r * mp.besselj(0, q * r) * (1 - mp.exp(-1j * A * r**-p))
    # inside rho = 1: the constant part in closed form, the phase part in u = A rho^-p
    flat = mp.besselj(1, q) / q
    wave = mp.quadosc(
        lambda u: A ** (mp.mpf(2) / p) / p * u ** (-mp.mpf(2) / p - 1) * mp.besselj(0, q * (A / u) ** (mp.mpf(1) / p))
        * mp.exp(-1j * u),
        [A, mp.inf],
        omega=1,
    )
    outer = mp.quadosc(g, [1, mp.inf], zeros=lambda n: mp.besseljzero(0, n) / q)
    ref = 1j * k * complex(flat - wave + outer)
    assert eikonal_amplitude(pot, k, th) == pytest.approx(ref, rel=1e-7)


def test_square_cross_section_fast_phase_closed_form():
    # int_0^R L sin^2(c L) dL in closed form, c = G/(2k); many oscillations
    G, R, k = 15.0, 1.0, 0.004
    c = G / (2 * k)
    ref = R * R / 4 - R * math.sin(2 * c * R) / (4 * c) - (math.cos(2 * c * R) - 1) / (8 * c * c)
    assert eikonal_cross_section(SquareBarrier(G, R), k) == pytest.approx(8 * math.pi * ref, rel=1e-9)


def test_yukawa_fast_phase_is_finite_and_unitary():
    pot, k = Yukawa(15.0), 0.01
    sigma = eikonal_cross_section(pot, k)
    assert sigma * k / (4 * math.pi * eikonal_forward_im(pot, k)) == pytest.approx(1.0, rel=1e-9)


def test_all_angle_matches_small_angle_near_forward():
    pot, k = Yukawa(5.0), 3.0
    a = eikonal_amplitude_all_angle(pot, k, 1e-4)
    b = eikonal_amplitude(pot, k, 1e-4)
    assert a == pytest.approx(b, rel=1e-7)


def test_all_angle_square_against_double_quadrature():
    pot, k, th = SquareBarrier(4.0), 3.0, 0.6
    beta = 2 * k * math.sin(th / 2) ** 2
    G, m = pot.G, pot.mass

    def inner(rho):
        L = math.sqrt(1 - rho * rho)
        # V e^{i beta z} exp(-(i m/k) G (L - z)) over |z| < L
        return mp.quad(lambda z: G * mp.exp(1j * beta * z - 1j * m / k * G * (L - z)), [-L, L])

    ref = -m * mp.quad(lambda r: r * mp.besselj(0, k * r * math.sin(th)) * inner(float(r)), [0, 1])
    assert eikonal_amplitude_all_angle(pot, k, th) == pytest.approx(complex(ref), rel=1e-7)


def test_all_angle_rejects_singular():
    with pytest.raises(UnsupportedPotentialError):
        eikonal_amplitude_all_angle(Singular(1.0, 2), 1.0, 0.2)


@pytest.mark.parametrize("k,th", [(0.0, 0.0), (1e-4, 0.0), (1.0, -0.1), (1.0, 4.0)])
def test_domain(k, th):
    with pytest.raises(DomainError):
        eikonal_amplitude(Yukawa(1.0), k, th)


def test_zero_coupling():
    assert eikonal_amplitude(Yukawa(0.0), 1.0) == 0
    assert eikonal_forward_im(SquareBarrier(0.0), 1.0) == 0
