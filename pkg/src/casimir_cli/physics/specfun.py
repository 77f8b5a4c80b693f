"""Special functions evaluated on the imaginary frequency axis.

Modified cylindrical and spherical Bessel functions (with exponent-scaled and
logarithmic variants), associated Legendre functions for arguments x >= 1,
spherical harmonics with the Condon-Shortley phase, and Wigner 3j symbols.

Conventions:
    i_l(z) = sqrt(pi / 2z) I_{l+1/2}(z)
    k_l(z) = sqrt(2 / (pi z)) K_{l+1/2}(z)      so that k_0(z) = exp(-z) / z
    P_l^m(x) = (x^2 - 1)^(m/2) d^m P_l / dx^m   for x >= 1 (no (-1)^m)

Every function here is pure. The 3j cache is an ``functools.lru_cache`` and
therefore safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

from ..errors import NumericalOverflowError, SelectionError

MAX_ORDER = 150
EXACT_3J_MAX_L = 20

_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class BesselPair:
    """A Bessel-type function value and its derivative w.r.t. the argument."""

    value: float
    derivative: float


def _check_order(n: int) -> None:
    if n < 0 or n > MAX_ORDER:
        raise SelectionError(f"order {n} outside supported range 0..{MAX_ORDER}")


def _check_argument(x: float) -> None:
    if not (x > 0.0) or not math.isfinite(x):
        raise ValueError(f"argument must be finite and positive, got {x!r}")


# ---------------------------------------------------------------------------
# Exponent-scaled kernels (array friendly)
# ---------------------------------------------------------------------------


def bessel_i_scaled(n, x):
    """Return exp(-x) * (I_n(x), I_n'(x)) for integer or real order ``n``."""
    n = np.asarray(n, dtype=float)
    x = np.asarray(x, dtype=float)
    value = special.ive(n, x)
    derivative = 0.5 * (special.ive(n - 1.0, x) + special.ive(n + 1.0, x))
    return value, derivative


def bessel_k_scaled(n, x):
    """Return exp(+x) * (K_n(x), K_n'(x)) for integer or real order ``n``."""
    n = np.asarray(n, dtype=float)
    x = np.asarray(x, dtype=float)
    value = special.kve(n, x)
    derivative = -0.5 * (special.kve(n - 1.0, x) + special.kve(n + 1.0, x))
    return value, derivative


def sph_bessel_i_scaled(l, z):
    """Return exp(-z) * (i_l(z), i_l'(z))."""
    l = np.asarray(l, dtype=float)
    z = np.asarray(z, dtype=float)
    pref = np.sqrt(np.pi / (2.0 * z))
    value = pref * special.ive(l + 0.5, z)
    derivative = pref * special.ive(l + 1.5, z) + l / z * value
    return value, derivative


def sph_bessel_k_scaled(l, z):
    """Return exp(+z) * (k_l(z), k_l'(z))."""
    l = np.asarray(l, dtype=float)
    z = np.asarray(z, dtype=float)
    pref = np.sqrt(2.0 / (np.pi * z))
    value = pref * special.kve(l + 0.5, z)
    derivative = -pref * special.kve(l + 1.5, z) + l / z * value
    return value, derivative


# ---------------------------------------------------------------------------
# Logarithmic kernels: log|f| and the logarithmic derivative f'/f
# ---------------------------------------------------------------------------


def log_bessel_i(nu, x):
    """log I_nu(x) for nu >= 0, x > 0, without underflow at small x."""
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.log(special.ive(nu, x)) + x
    small = ~np.isfinite(out)
    if np.any(small):
        nu_b, x_b = np.broadcast_arrays(nu, x)
        series = nu_b * np.log(0.5 * x_b) - special.gammaln(nu_b + 1.0)
        out = np.where(small, series, out)
    return out


def log_bessel_k(nu, x):
    """log K_nu(x) for nu >= 0, x > 0, without overflow at small x."""
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        out = np.log(special.kve(nu, x)) - x
    large = ~np.isfinite(out)
    if np.any(large):
        nu_b, x_b = np.broadcast_arrays(nu, x)
        nu_safe = np.maximum(nu_b, 1e-300)
        series = special.gammaln(nu_safe) + nu_b * np.log(2.0 / x_b) - math.log(2.0)
        out = np.where(large, series, out)
    return out


def bessel_i_logderiv(nu, x):
    """I_nu'(x) / I_nu(x)."""
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    return np.exp(log_bessel_i(nu + 1.0, x) - log_bessel_i(nu, x)) + nu / x


def bessel_k_logderiv(nu, x):
    """K_nu'(x) / K_nu(x); always negative."""
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    return -np.exp(log_bessel_k(nu + 1.0, x) - log_bessel_k(nu, x)) + nu / x


def log_sph_bessel_i(l, z):
    z = np.asarray(z, dtype=float)
    return 0.5 * np.log(np.pi / (2.0 * z)) + log_bessel_i(np.asarray(l) + 0.5, z)


def log_sph_bessel_k(l, z):
    z = np.asarray(z, dtype=float)
    return 0.5 * np.log(2.0 / (np.pi * z)) + log_bessel_k(np.asarray(l) + 0.5, z)


def sph_bessel_i_logderiv(l, z):
    """i_l'(z) / i_l(z)."""
    z = np.asarray(z, dtype=float)
    return bessel_i_logderiv(np.asarray(l) + 0.5, z) - 0.5 / z


def sph_bessel_k_logderiv(l, z):
    """k_l'(z) / k_l(z)."""
    z = np.asarray(z, dtype=float)
    return bessel_k_logderiv(np.asarray(l) + 0.5, z) - 0.5 / z


# ---------------------------------------------------------------------------
# Scalar public API
# ---------------------------------------------------------------------------


def _unscale(value: float, derivative: float, exponent: float, name: str) -> BesselPair:
    if exponent > _LOG_MAX or not (math.isfinite(value) and math.isfinite(derivative)):
        raise NumericalOverflowError(f"{name} overflows double precision")
    factor = math.exp(exponent)
    result = BesselPair(value * factor, derivative * factor)
    if not (math.isfinite(result.value) and math.isfinite(result.derivative)):
        raise NumericalOverflowError(f"{name} overflows double precision")
    return result


def bessel_i(n: int, x: float) -> BesselPair:
    """Modified Bessel function of the first kind I_n(x) and I_n'(x)."""
    _check_order(n)
    _check_argument(x)
    value, derivative = bessel_i_scaled(n, x)
    return _unscale(float(value), float(derivative), x, f"I_{n}({x})")


def bessel_k(n: int, x: float) -> BesselPair:
    """Modified Bessel function of the third kind K_n(x) and K_n'(x)."""
    _check_order(n)
    _check_argument(x)
    value, derivative = bessel_k_scaled(n, x)
    return _unscale(float(value), float(derivative), -x, f"K_{n}({x})")


def sph_bessel_i(l: int, z: float) -> BesselPair:
    """Modified spherical Bessel function i_l(z) and its derivative."""
    _check_order(l)
    _check_argument(z)
    value, derivative = sph_bessel_i_scaled(l, z)
    return _unscale(float(value), float(derivative), z, f"i_{l}({z})")


def sph_bessel_k(l: int, z: float) -> BesselPair:
    """Modified spherical Bessel function k_l(z) and its derivative."""
    _check_order(l)
    _check_argument(z)
    value, derivative = sph_bessel_k_scaled(l, z)
    return _unscale(float(value), float(derivative), -z, f"k_{l}({z})")


# ---------------------------------------------------------------------------
# Associated Legendre functions for x >= 1
# ---------------------------------------------------------------------------


def _double_factorial_odd(m: int) -> float:
    """(2m - 1)!! as a float, with (-1)!! = 1."""
    return float(math.prod(range(1, 2 * m, 2)))


def legendre_ge1_scaled(lmax: int, m: int, t) -> np.ndarray:
    """Table of d^m P_l/dt^m divided by t^(l-m) for l = 0..lmax.

    Rows with l < m are zero. The scaling keeps every entry bounded by its
    value at t = 1, so the table is safe for arbitrarily large t.
    """
    if m < 0 or m > lmax:
        raise SelectionError(f"m = {m} outside 0..{lmax}")
    t = np.asarray(t, dtype=float)
    table = np.zeros((lmax + 1,) + t.shape)
    table[m] = _double_factorial_odd(m)
    if m + 1 <= lmax:
        table[m + 1] = (2 * m + 1) * table[m]
    inv_t2 = 1.0 / (t * t)
    for l in range(m + 1, lmax):
        table[l + 1] = ((2 * l + 1) * table[l] - (l + m) * table[l - 1] * inv_t2) / (l - m + 1)
    return table


def assoc_legendre_ge1(l: int, m: int, x: float) -> tuple[float, float]:
    """P_l^m(x) and dP_l^m/dx for x >= 1, using (x^2 - 1)^(m/2) d^m P_l/dx^m."""
    if l < 0 or m < 0:
        raise SelectionError(f"invalid Legendre indices l={l}, m={m}")
    if m > l:
        raise SelectionError(f"m = {m} exceeds l = {l}")
    if x < 1.0:
        raise ValueError(f"argument must be >= 1, got {x}")

    poly = float(legendre_ge1_scaled(l, m, x)[l]) * x ** (l - m)
    poly_next = float(legendre_ge1_scaled(l, m + 1, x)[l]) * x ** (l - m - 1) if m < l else 0.0
    u2 = x * x - 1.0
    value = u2 ** (m / 2) * poly

    if u2 == 0.0:
        if m == 0:
            derivative = poly_next
        elif m == 1:
            derivative = math.inf
        elif m == 2:
            derivative = 2.0 * poly
        else:
            derivative = 0.0
    else:
        derivative = m * x * u2 ** ((m - 2) / 2) * poly + u2 ** (m / 2) * poly_next
    return value, derivative


# ---------------------------------------------------------------------------
# Spherical harmonics
# ---------------------------------------------------------------------------


def _ylm_norm(l: int, m: int) -> float:
    return math.exp(
        0.5
        * (
            math.log(2 * l + 1)
            - math.log(4.0 * math.pi)
            + special.gammaln(l - m + 1)
            - special.gammaln(l + m + 1)
        )
    )


def spherical_harmonic(l: int, m: int, theta: float, phi: float) -> complex:
    """Orthonormal Y_lm(theta, phi) with the Condon-Shortley phase."""
    if l < 0 or abs(m) > l:
        raise SelectionError(f"invalid harmonic indices l={l}, m={m}")
    mm = abs(m)
    value = _ylm_norm(l, mm) * float(special.lpmv(mm, l, math.cos(theta)))
    y = complex(value * math.cos(mm * phi), value * math.sin(mm * phi))
    if m < 0:
        y = (-1) ** mm * y.conjugate()
    return y


def spherical_harmonic_table(lmax: int, theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Y_lm and dY_lm/dtheta for l <= lmax, indexed ``[l, m + lmax]``."""
    width = 2 * lmax + 1
    y = np.zeros((lmax + 1, width), dtype=complex)
    for l in range(lmax + 1):
        for m in range(-l, l + 1):
            y[l, m + lmax] = spherical_harmonic(l, m, theta, phi)

    dy = np.zeros_like(y)
    up = np.exp(-1j * phi)
    down = np.exp(1j * phi)
    for l in range(lmax + 1):
        for m in range(-l, l + 1):
            total = 0.0j
            if m + 1 <= l:
                total += math.sqrt((l - m) * (l + m + 1)) * up * y[l, m + 1 + lmax]
            if m - 1 >= -l:
                total -= math.sqrt((l + m) * (l - m + 1)) * down * y[l, m - 1 + lmax]
            dy[l, m + lmax] = 0.5 * total
    return y, dy


# ---------------------------------------------------------------------------
# Wigner 3j symbols
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _factorial_exponents(n: int, primes: tuple[int, ...]) -> list[int]:
    """Exponent of each prime in n! (Legendre's formula)."""
    exps = []
    for p in primes:
        e, power = 0, p
        while power <= n:
            e += n // power
            power *= p
        exps.append(e)
    return exps


def _sqrt_ratio_exact(numer: list[int], denom: list[int]) -> float:
    """sqrt(prod numer! / prod denom!) through prime factorisation."""
    primes = _primes_upto(max(numer + denom + [2]))
    total = [0] * len(primes)
    for n in numer:
        for i, e in enumerate(_factorial_exponents(n, primes)):
            total[i] += e
    for n in denom:
        for i, e in enumerate(_factorial_exponents(n, primes)):
            total[i] -= e

    square = Fraction(1)
    radicand = 1
    for p, e in zip(primes, total):
        half, odd = divmod(e, 2)
        if half > 0:
            square *= p**half
        elif half < 0:
            square /= p ** (-half)
        if odd:
            radicand *= p
    return float(square) * math.sqrt(radicand)


@lru_cache(maxsize=500_000)
def wigner3j(l1: int, l2: int, l3: int, m1: int, m2: int, m3: int) -> float:
    """Wigner 3j symbol; returns 0.0 whenever a selection rule fails."""
    if m1 + m2 + m3 != 0:
        return 0.0
    if min(l1, l2, l3) < 0:
        return 0.0
    if abs(m1) > l1 or abs(m2) > l2 or abs(m3) > l3:
        return 0.0
    if l3 < abs(l1 - l2) or l3 > l1 + l2:
        return 0.0

    a = l1 + l2 - l3
    b = l1 - l2 + l3
    c = -l1 + l2 + l3
    big_j = l1 + l2 + l3

    kmin = max(0, l1 - m1 - b, l2 + m2 - c)
    kmax = min(a, l1 - m1, l2 + m2)
    series = 0
    for k in range(kmin, kmax + 1):
        term = math.comb(a, k) * math.comb(b, l1 - m1 - k) * math.comb(c, l2 + m2 - k)
        series += -term if k % 2 else term
    if series == 0:
        return 0.0

    sign = -1.0 if (l1 - l2 - m3) % 2 else 1.0
    numer = [l1 + m1, l1 - m1, l2 + m2, l2 - m2, l3 + m3, l3 - m3]
    denom = [a, b, c, big_j + 1]

    if max(l1, l2, l3) <= EXACT_3J_MAX_L:
        return sign * series * _sqrt_ratio_exact(numer, denom)

    log_q = sum(special.gammaln(n + 1) for n in numer) - sum(special.gammaln(n + 1) for n in denom)
    magnitude = math.exp(math.log(abs(series)) + 0.5 * log_q)
    return sign * math.copysign(magnitude, series)
