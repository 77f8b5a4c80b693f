"""Tests for the special functions."""

import math

import numpy as np
import pytest
from scipy import special

from casimir_cli.errors import NumericalOverflowError, SelectionError
from casimir_cli.physics import specfun


def test_spherical_bessel_closed_forms():
    z = 1.7
    assert specfun.sph_bessel_k(0, z).value == pytest.approx(math.exp(-z) / z, rel=1e-14)
    assert specfun.sph_bessel_i(0, z).value == pytest.approx(math.sinh(z) / z, rel=1e-14)
    # k_0'(z) = -exp(-z)(1 + z) / z^2
    assert specfun.sph_bessel_k(0, z).derivative == pytest.approx(-math.exp(-z) * (1 + z) / z**2, rel=1e-13)


@pytest.mark.parametrize("n", [0, 1, 5, 20])
@pytest.mark.parametrize("x", [0.05, 1.0, 30.0])
def test_cylindrical_wronskian(n, x):
    i, k = specfun.bessel_i(n, x), specfun.bessel_k(n, x)
    assert (i.value * k.derivative - i.derivative * k.value) * x == pytest.approx(-1.0, rel=1e-10)


@pytest.mark.parametrize("l", [0, 1, 4, 15])
@pytest.mark.parametrize("z", [0.1, 2.0, 40.0])
def test_spherical_wronskian(l, z):
    i, k = specfun.sph_bessel_i(l, z), specfun.sph_bessel_k(l, z)
    assert (i.value * k.derivative - i.derivative * k.value) * z**2 == pytest.approx(-1.0, rel=1e-10)


def test_log_forms_survive_extreme_arguments():
    # I_100(1e-3) underflows and K_100(1e-3) overflows, the logs do not.
    log_i = float(specfun.log_bessel_i(100, 1e-3))
    log_k = float(specfun.log_bessel_k(100, 1e-3))
    assert math.isfinite(log_i) and math.isfinite(log_k)
    # I_nu K_nu ~ 1 / (2 nu) for small x
    assert log_i + log_k == pytest.approx(math.log(1 / 200), rel=1e-6)


def test_log_derivatives_match_values():
    x = 3.3
    i = specfun.bessel_i(3, x)
    k = specfun.bessel_k(3, x)
    assert float(specfun.bessel_i_logderiv(3, x)) == pytest.approx(i.derivative / i.value, rel=1e-12)
    assert float(specfun.bessel_k_logderiv(3, x)) == pytest.approx(k.derivative / k.value, rel=1e-12)
    si = specfun.sph_bessel_i(2, x)
    assert float(specfun.sph_bessel_i_logderiv(2, x)) == pytest.approx(si.derivative / si.value, rel=1e-12)


def test_overflow_and_order_limits():
    with pytest.raises(NumericalOverflowError):
        specfun.bessel_i(0, 800.0)
    with pytest.raises(SelectionError):
        specfun.bessel_k(specfun.MAX_ORDER + 1, 1.0)
    with pytest.raises(ValueError):
        specfun.sph_bessel_k(1, 0.0)


def test_legendre_above_one():
    x = 2.5
    assert specfun.assoc_legendre_ge1(1, 0, x) == pytest.approx((x, 1.0))
    assert specfun.assoc_legendre_ge1(1, 1, x)[0] == pytest.approx(math.sqrt(x * x - 1))
    value, derivative = specfun.assoc_legendre_ge1(2, 0, x)
    assert value == pytest.approx((3 * x * x - 1) / 2)
    assert derivative == pytest.approx(3 * x)
    assert specfun.assoc_legendre_ge1(2, 2, x) == pytest.approx((3 * (x * x - 1), 6 * x))


def test_legendre_rejects_bad_indices():
    with pytest.raises(SelectionError):
        specfun.assoc_legendre_ge1(1, 2, 1.5)
    with pytest.raises(ValueError):
        specfun.assoc_legendre_ge1(2, 1, 0.5)


def test_spherical_harmonics_match_scipy():
    theta, phi = 0.7, 2.1
    for l in range(6):
        for m in range(-l, l + 1):
            expected = special.sph_harm_y(l, m, theta, phi)
            assert specfun.spherical_harmonic(l, m, theta, phi) == pytest.approx(expected, abs=1e-13)


def test_harmonic_theta_derivative():
    theta, phi, h = 1.1, 0.4, 1e-6
    _, dy = specfun.spherical_harmonic_table(4, theta, phi)
    plus, _ = specfun.spherical_harmonic_table(4, theta + h, phi)
    minus, _ = specfun.spherical_harmonic_table(4, theta - h, phi)
    assert np.allclose(dy, (plus - minus) / (2 * h), atol=1e-7)


def test_wigner3j_values():
    assert specfun.wigner3j(1, 1, 0, 0, 0, 0) == pytest.approx(-1 / math.sqrt(3))
    assert specfun.wigner3j(1, 1, 2, 0, 0, 0) == pytest.approx(math.sqrt(2 / 15))
    assert specfun.wigner3j(2, 2, 0, 1, -1, 0) == pytest.approx(-1 / math.sqrt(5))


def test_wigner3j_selection_rules():
    assert specfun.wigner3j(1, 1, 1, 0, 0, 0) == 0.0  # odd sum with all m = 0
    assert specfun.wigner3j(1, 1, 3, 0, 0, 0) == 0.0  # triangle
    assert specfun.wigner3j(2, 2, 2, 1, 1, 1) == 0.0  # m sum
    assert specfun.wigner3j(1, 2, 2, 2, 0, -2) == 0.0  # |m1| > l1


def test_wigner3j_orthogonality():
    l1, l2 = 3, 2
    for m1 in range(-l1, l1 + 1):
        for m2 in range(-l2, l2 + 1):
            total = sum(
                (2 * l3 + 1) * specfun.wigner3j(l1, l2, l3, m1, m2, -m1 - m2) ** 2
                for l3 in range(abs(l1 - l2), l1 + l2 + 1)
            )
            assert total == pytest.approx(1.0, abs=1e-12)
