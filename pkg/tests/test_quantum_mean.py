import math

import mpmath as mp
import numpy as np
import pytest

from pathscatter import (
    CalibrationError,
    DegenerateCalibrationError,
    DomainError,
    Singular,
    SquareBarrier,
    UnsupportedPotentialError,
    Yukawa,
)
from pathscatter.quantum_mean import (
    QmaParams,
    calibrate_kc_amplitude,
    calibrate_kc_sigma,
    qma_amplitude,
    qma_cross_section_from_amplitude,
    qma_forward_length,
    qma_scattering_length,
    qma_sigma,
    qma_sigma_zero,
    singular_qma_factor,
    singular_qma_length,
    square_qma_length_closed,
    square_qma_sigma_closed,
)


@pytest.mark.parametrize("G,b", [(1.0, 1.0), (7.0, 0.8), (0.3, 2.0)])
def test_yukawa_length_against_quadrature(G, b):
    ref = 2 * G * mp.quad(lambda r: r * mp.exp(-r - 2 * G / b * mp.exp(-r)), [0, 1, 10, mp.inf])
    assert qma_scattering_length(Yukawa(G), b) == pytest.approx(float(ref), rel=1e-10)


@pytest.mark.parametrize("G,R,b", [(1.0, 1.0, 1.0), (15.0, 1.0, 0.8), (4.0, 2.0, 1.3), (1e-3, 1.0, 1.0)])
def test_square_length_closed_form(G, R, b):
    ref = G * mp.quad(lambda r: r * r * mp.exp(-G / (2 * b) * (R * R - r * r)), [0, R])
    assert square_qma_length_closed(G, R, b) == pytest.approx(float(ref), rel=1e-12)
    assert qma_scattering_length(SquareBarrier(G, R), b) == pytest.approx(float(ref), rel=1e-10)


@pytest.mark.parametrize("G,N,b", [(1.0, 2, 1.0), (3.0, 3, 0.8), (0.5, 6, 1.0)])
def test_singular_length_closed_form(G, N, b):
    pot = Singular(G, N)
    assert singular_qma_length(G, N, b) == pytest.approx(qma_scattering_length(pot, b), rel=1e-9)


def test_singular_factor_value():
    assert singular_qma_factor(2) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


def test_length_increases_with_coupling_and_spread():
    a = [qma_scattering_length(Yukawa(G)) for G in (0.5, 1, 2, 4)]
    assert np.all(np.diff(a) > 0)
    assert qma_scattering_length(Yukawa(2.0), 1.0) > qma_scattering_length(Yukawa(2.0), 0.7)


@pytest.mark.parametrize("G,k,kc", [(5.0, 0.0, 1.9), (15.0, 2.0, 0.4), (1.0, 0.3, 5e-4 * 1e3), (60.0, 0.0, 0.05)])
def test_square_sigma_closed_form(G, k, kc):
    B = G / (2 * math.hypot(kc, k))
    # r dr = -u du with u = sqrt(1 - r^2)
    ref = 8 * mp.pi * mp.quad(lambda u: u * mp.sin(B * u) ** 2, mp.linspace(0, 1, 2 + int(B)))
    assert square_qma_sigma_closed(G, 1.0, k, kc) == pytest.approx(float(ref), rel=1e-11)
    assert qma_sigma(SquareBarrier(G), k, kc) == pytest.approx(float(ref), rel=1e-9)


def test_square_sigma_small_b_branch_is_continuous():
    kc = 1.0
    for B in (0.4999999, 0.5000001):
        ref = 8 * mp.pi * mp.quad(lambda u: u * mp.sin(B * u) ** 2, [0, 1])
        assert square_qma_sigma_closed(2 * B, 1.0, 0.0, kc) == pytest.approx(float(ref), rel=1e-13)
    ref = 8 * mp.pi * mp.quad(lambda u: u * mp.sin(1e-5 * u) ** 2, [0, 1])
    assert square_qma_sigma_closed(2e-5, 1.0, 0.0, kc) == pytest.approx(float(ref), rel=1e-13)


def test_yukawa_sigma_against_quadrature():
    G, k, kc = 5.0, 1.0, 0.5
    s = math.hypot(kc, k)
    ref = 8 * mp.pi * mp.quad(lambda r: r * mp.sin(G * mp.besselk(0, r) / s) ** 2, [0, 0.01, 0.1, 1, 5, 40])
    assert qma_sigma(Yukawa(G), k, kc) == pytest.approx(float(ref), rel=1e-8)


def test_forward_length_rises_to_born():
    pot = Yukawa(2.0)
    vals = [qma_forward_length(pot, kc) for kc in np.geomspace(1e-2, 1e3, 12)]
    assert np.all(np.diff(vals) > 0)
    # k_c -> inf: k_c int rho (1 - exp(-mY/k_c)) -> int rho mY = 2m int r^2 V
    assert vals[-1] == pytest.approx(2 * 2.0, rel=1e-2)


def printed_square_amplitude(G, R, k, th, kc):
    """Closed-form square amplitude as printed, in the positive-length sign convention."""
    s2 = math.sin(th / 2) ** 2
    lam = G / (2 * (1j * kc + k))

    def integrand(r):
        L = mp.sqrt(R * R - r * r)
        num = mp.exp(2j * k * s2 * L) - mp.exp(-2j * (k * s2 + lam) * L)
        return r * mp.besselj(0, k * r * math.sin(th)) * num / (lam + 2 * k * s2)

    return -complex(G / 2j * mp.quad(integrand, [0, R]))


@pytest.mark.parametrize("k,th", [(1.0, 0.4), (3.0, 1.2), (0.5, 0.0), (2.0, math.pi)])
def test_square_amplitude_against_printed_closed_form(k, th):
    G, kc = 5.0, 1.8856
    f = qma_amplitude(SquareBarrier(G), k, th, kc)
    assert f == pytest.approx(printed_square_amplitude(G, 1.0, k, th, kc), rel=1e-7)


@pytest.mark.parametrize("pot", [SquareBarrier(5.0), Yukawa(5.0), Singular(1.0, 3)])
def test_zero_momentum_amplitude_is_minus_forward_length(pot):
    kc = 0.7
    f = qma_amplitude(pot, 0.0, 0.0, kc)
    assert f.imag == 0
    assert f.real == pytest.approx(-qma_forward_length(pot, kc), rel=1e-9)


def test_zero_momentum_amplitude_is_isotropic():
    pot = Yukawa(3.0)
    assert qma_amplitude(pot, 0.0, 2.0, 0.5) == pytest.approx(qma_amplitude(pot, 0.0, 0.0, 0.5), rel=1e-8)


@pytest.mark.parametrize("pot", [SquareBarrier(5.0), SquareBarrier(10.0), Yukawa(5.0), Yukawa(15.0)])
@pytest.mark.parametrize("b", [1.0, 0.8])
def test_amplitude_calibration(pot, b):
    cal = calibrate_kc_amplitude(pot, b)
    assert abs(cal.residual) <= 1e-10
    assert len(cal.candidates) == 1
    assert qma_forward_length(pot, cal.k_c) == pytest.approx(qma_scattering_length(pot, b), rel=1e-10)


@pytest.mark.parametrize("pot", [SquareBarrier(5.0), SquareBarrier(10.0), Yukawa(5.0), Yukawa(15.0)])
def test_sigma_calibration(pot):
    cal = calibrate_kc_sigma(pot, 1.0)
    assert abs(cal.residual) <= 1e-10 * qma_sigma_zero(pot)
    assert qma_sigma(pot, 0.0, cal.k_c) == pytest.approx(qma_sigma_zero(pot), rel=1e-12)
    assert cal.to_dict()["variant"] == "cross_section"


def test_sigma_calibration_without_root_is_structured():
    # sup over k_c of sigma(0, k_c) is about 9.97 R^2, below 4 pi a^2 = 10.81
    with pytest.raises(CalibrationError) as info:
        calibrate_kc_sigma(SquareBarrier(15.0), 1.0)
    rec = info.value.to_dict()
    assert rec["code"] == "calibration_failed"
    assert len(rec["scan"]) > 3
    Bs = np.linspace(0.1, 8, 4000)
    sup = max(square_qma_sigma_closed(15.0, 1.0, 0.0, 15.0 / (2 * B)) for B in Bs)
    assert sup < qma_sigma_zero(SquareBarrier(15.0), 1.0)


@pytest.mark.parametrize("cal", [calibrate_kc_amplitude, calibrate_kc_sigma])
def test_zero_coupling_calibration(cal):
    with pytest.raises(DegenerateCalibrationError):
        cal(Yukawa(0.0))


def test_cross_section_from_amplitude_low_k():
    pot = SquareBarrier(5.0)
    kc = calibrate_kc_amplitude(pot).k_c
    a = qma_scattering_length(pot)
    assert qma_cross_section_from_amplitude(pot, 1e-3, kc) == pytest.approx(4 * math.pi * a * a, rel=1e-4)
    assert qma_cross_section_from_amplitude(pot, 0.0, kc) == pytest.approx(4 * math.pi * a * a, rel=1e-9)


def test_domain_and_support():
    with pytest.raises(DomainError):
        QmaParams(b=0.0)
    with pytest.raises(DomainError):
        qma_sigma(Yukawa(1.0), -1.0, 1.0)
    with pytest.raises(DomainError):
        qma_amplitude(Yukawa(1.0), 1.0, 0.1, 0.0)
    with pytest.raises(UnsupportedPotentialError):
        qma_amplitude(Singular(1.0, 2), 1.0, 0.3, 1.0)
