import mpmath as mp
import numpy as np
import pytest

from pathscatter import DomainError
from pathscatter import specfun as sf

XS = [1e-3, 0.3, 1.0, 4.7, 18.0]


@pytest.mark.parametrize("x", XS)
def test_j0(x):
    assert sf.bessel_j0(x) == pytest.approx(float(mp.besselj(0, x)), rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("x", XS)
def test_k0(x):
    assert sf.bessel_k0(x) == pytest.approx(float(mp.besselk(0, x)), rel=1e-13)


@pytest.mark.parametrize("x", [1e-4, 0.5, 2.0, 6.0])
def test_erfi_and_scaled(x):
    assert sf.erfi(x) == pytest.approx(float(mp.erfi(x)), rel=1e-13)
    assert sf.scaled_erfi(x) == pytest.approx(float(mp.exp(-x * x) * mp.erfi(x)), rel=1e-13)


def test_scaled_erfi_large_argument_is_finite():
    assert sf.scaled_erfi(40.0) == pytest.approx(float(mp.exp(-1600) * mp.erfi(40)), rel=1e-12)


@pytest.mark.parametrize("x", [0.02, 0.5, 1.5, 7.3])
def test_gamma(x):
    assert sf.gamma(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)


@pytest.mark.parametrize("ell", [0, 1, 5])
@pytest.mark.parametrize("x", [0.2, 3.0, 12.0])
def test_spherical_bessel_pair(ell, x):
    j, dj, y, dy = sf.spherical_bessel_pair(ell, x)
    jm = lambda t: mp.sqrt(mp.pi / (2 * t)) * mp.besselj(ell + 0.5, t)
    ym = lambda t: mp.sqrt(mp.pi / (2 * t)) * mp.bessely(ell + 0.5, t)
    assert j == pytest.approx(float(jm(x)), rel=1e-11, abs=1e-300)
    assert dj == pytest.approx(float(mp.diff(jm, x)), rel=1e-9, abs=1e-300)
    assert y == pytest.approx(float(ym(x)), rel=1e-11)
    assert dy == pytest.approx(float(mp.diff(ym, x)), rel=1e-9)


@pytest.mark.parametrize("ell", [0, 2, 9])
@pytest.mark.parametrize("x", [0.5, 4.0, 300.0])
def test_scaled_modified_spherical_i(ell, x):
    im = lambda t: mp.exp(-t) * mp.sqrt(mp.pi / (2 * t)) * mp.besseli(ell + 0.5, t)
    i_l, di = sf.modified_spherical_i_pair(ell, x, scaled=True)
    # derivative of the unscaled function, then scaled
    dref = mp.exp(-x) * mp.diff(lambda t: mp.sqrt(mp.pi / (2 * t)) * mp.besseli(ell + 0.5, t), x)
    assert i_l == pytest.approx(float(im(x)), rel=1e-11)
    assert di == pytest.approx(float(dref), rel=1e-9)


def test_modified_i_at_zero():
    i0, d0 = sf.modified_spherical_i_pair(0, 0.0, scaled=True)
    i1, d1 = sf.modified_spherical_i_pair(1, 0.0, scaled=True)
    assert (i0, d0, i1, d1) == (1.0, 0.0, 0.0, pytest.approx(1 / 3))


def test_array_input_keeps_shape():
    out = sf.bessel_j0(np.array([0.0, 1.0]))
    assert out.shape == (2,)


@pytest.mark.parametrize(
    "call",
    [
        lambda: sf.bessel_k0(0.0),
        lambda: sf.gamma(-1.0),
        lambda: sf.bessel_j0(float("inf")),
        lambda: sf.spherical_bessel_pair(1, 0.0),
        lambda: sf.modified_spherical_i_pair(-1, 1.0),
    ],
)
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()
