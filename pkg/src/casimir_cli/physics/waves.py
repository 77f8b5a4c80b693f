"""Vector wave functions at imaginary frequency and the free Green's function.

All functions return Cartesian components. The free dyadic Green's function
expands in every basis as

    G0(x, x') = sum_a C_a E^out_a(x) (x) conj(E^reg_a(x'))

when x lies further out than x' in the basis's radial coordinate. Spherical
and cylindrical waves are undefined on the z axis; sample points off it.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import specfun
from .conversion import plane_to_cylindrical, plane_to_spherical
from .scattering import BasisKind, ChannelBasis, Polarization
from .translation import Displacement, sph_U_block


def free_greens(kappa: float, x, x_prime) -> np.ndarray:
    """Closed-form (I - grad grad / kappa^2) exp(-kappa R) / (4 pi R)."""
    R_vec = np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)
    R = float(np.linalg.norm(R_vec))
    if R == 0.0:
        raise ValueError("free Green's function is singular at coincident points")
    u = kappa * R
    g = math.exp(-u) / (4.0 * math.pi * R)
    n = R_vec / R
    iso = 1.0 + 1.0 / u + 1.0 / u**2
    aniso = 1.0 + 3.0 / u + 3.0 / u**2
    return g * (iso * np.eye(3) - aniso * np.outer(n, n))


def _spherical_frame(point):
    x, y, z = (float(v) for v in point)
    r = math.sqrt(x * x + y * y + z * z)
    theta = math.acos(max(-1.0, min(1.0, z / r)))
    phi = math.atan2(y, x)
    st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
    r_hat = np.array([st * cp, st * sp, ct])
    theta_hat = np.array([ct * cp, ct * sp, -st])
    phi_hat = np.array([-sp, cp, 0.0])
    return r, theta, phi, r_hat, theta_hat, phi_hat


def spherical_waves(basis: ChannelBasis, point, regular: bool = True) -> np.ndarray:
    """M/N spherical waves for every channel of ``basis`` at ``point``.

    Returns an array of shape (len(basis), 3).
    """
    if basis.kind is not BasisKind.SPHERICAL:
        raise ValueError("spherical waves need a spherical basis")
    kappa = basis.kappa
    lmax = max(ch[0] for ch in basis.channels)
    r, theta, phi, r_hat, theta_hat, phi_hat = _spherical_frame(point)
    sin_theta = max(math.sin(theta), 1e-300)
    y, dy = specfun.spherical_harmonic_table(lmax, theta, phi)

    ls = np.arange(lmax + 1)
    z = kappa * r
    if regular:
        f, df = specfun.sph_bessel_i_scaled(ls, z)
        scale = math.exp(z)
    else:
        f, df = specfun.sph_bessel_k_scaled(ls, z)
        scale = math.exp(-z)
    f, df = f * scale, df * scale

    out = np.zeros((len(basis), 3), dtype=complex)
    for i, (l, m, pol) in enumerate(basis.channels):
        Y = y[l, m + lmax]
        dY = dy[l, m + lmax]
        norm = 1.0 / math.sqrt(l * (l + 1))
        angular_t = 1j * m / sin_theta * Y
        if pol is Polarization.M:
            out[i] = norm * f[l] * (angular_t * theta_hat - dY * phi_hat)
        else:
            d_rf = f[l] + z * df[l]  # d(r f)/dr
            out[i] = (norm / kappa) * (
                l * (l + 1) * f[l] / r * Y * r_hat + d_rf / r * (dY * theta_hat + angular_t * phi_hat)
            )
    return out


def cylindrical_waves_scaled(basis: ChannelBasis, point, regular: bool = True) -> tuple[np.ndarray, float]:
    """Cylindrical waves divided by exp(log_scale), and log_scale.

    The radial factor exp(+p rho) (regular) or exp(-p rho) (outgoing) is
    returned separately so products of waves can be formed in log space.
    """
    if basis.kind is not BasisKind.CYLINDRICAL:
        raise ValueError("cylindrical waves need a cylindrical basis")
    kappa, k_z = basis.kappa, basis.k_z
    p = math.hypot(kappa, k_z)
    x, y, zc = (float(v) for v in point)
    rho = math.hypot(x, y)
    theta = math.atan2(y, x)
    rho_hat = np.array([math.cos(theta), math.sin(theta), 0.0])
    theta_hat = np.array([-math.sin(theta), math.cos(theta), 0.0])
    z_hat = np.array([0.0, 0.0, 1.0])

    ns = np.array([ch[0] for ch in basis.channels])
    arg = p * rho
    if regular:
        Z, dZ = specfun.bessel_i_scaled(np.abs(ns), arg)
        log_scale = arg
    else:
        Z, dZ = specfun.bessel_k_scaled(np.abs(ns), arg)
        log_scale = -arg

    out = np.zeros((len(basis), 3), dtype=complex)
    for i, (n, pol) in enumerate(basis.channels):
        phase = np.exp(1j * (k_z * zc + n * theta))
        if pol is Polarization.M:
            vec = (1j * n / rho * Z[i]) * rho_hat - p * dZ[i] * theta_hat
            out[i] = vec * phase / p
        else:
            vec = 1j * k_z * p * dZ[i] * rho_hat - (k_z * n / rho) * Z[i] * theta_hat - p * p * Z[i] * z_hat
            out[i] = vec * phase / (kappa * p)
    return out, log_scale


def cylindrical_waves(basis: ChannelBasis, point, regular: bool = True) -> np.ndarray:
    """M/N cylindrical waves at the basis's k_z, shape (len(basis), 3)."""
    waves, log_scale = cylindrical_waves_scaled(basis, point, regular)
    return waves * math.exp(log_scale)


def plane_wave(
    kappa: float,
    k_perp,
    polarization: Polarization | str,
    point,
    regular: bool = True,
) -> np.ndarray:
    """M/N plane wave growing (regular) or decaying (outgoing) along +z."""
    pol = Polarization.parse(polarization)
    kx, ky = (float(v) for v in k_perp)
    k = math.hypot(kx, ky)
    if k == 0.0:
        raise ValueError("vector plane waves need a nonzero transverse wave vector")
    q = math.sqrt(k * k + kappa * kappa)
    x, y, z = (float(v) for v in point)
    s = 1.0 if regular else -1.0
    phi = np.exp(1j * (kx * x + ky * y) + s * q * z)
    if pol is Polarization.M:
        return (1j / k) * np.array([ky, -kx, 0.0]) * phi
    return np.array([s * 1j * q * kx, s * 1j * q * ky, k * k]) * phi / (kappa * k)


def plane_wave_along_x(kappa: float, k_y: float, k_z: float, polarization: Polarization | str, point) -> np.ndarray:
    """Regular plane wave growing along +x, used for cylindrical conversion."""
    pol = Polarization.parse(polarization)
    K = math.hypot(k_y, k_z)
    if K == 0.0:
        raise ValueError("vector plane waves need a nonzero transverse wave vector")
    q = math.sqrt(K * K + kappa * kappa)
    x, y, z = (float(v) for v in point)
    phi = np.exp(q * x + 1j * (k_y * y + k_z * z))
    if pol is Polarization.M:
        return np.array([0.0, 1j * k_z, -1j * k_y]) * phi / K
    return np.array([K * K, 1j * q * k_y, 1j * q * k_z]) * phi / (kappa * K)


# ---------------------------------------------------------------------------
# Series forms of the free Green's function
# ---------------------------------------------------------------------------


def _outer_sum(out_waves: np.ndarray, reg_waves: np.ndarray, norms: np.ndarray) -> np.ndarray:
    """sum_a C_a out_a (x) conj(reg_a)."""
    return np.einsum("a,ai,aj->ij", norms, out_waves, np.conj(reg_waves))


def greens_spherical_series(kappa: float, x, x_prime, lmax: int) -> np.ndarray:
    """G0 from one spherical center at the origin; needs |x| > |x'|."""
    if np.linalg.norm(x) <= np.linalg.norm(x_prime):
        raise ValueError("the outgoing point must lie further from the origin")
    basis = ChannelBasis.spherical(kappa, lmax)
    return _outer_sum(spherical_waves(basis, x, regular=False), spherical_waves(basis, x_prime), basis.norms)


@lru_cache(maxsize=8)
def _translation_matrix(kappa: float, X: tuple[float, float, float], lmax: int) -> np.ndarray:
    return sph_U_block(ChannelBasis.spherical(kappa, lmax), Displacement.of(X)).dense()


def greens_translated_series(kappa: float, x, x_prime, origin_src, origin_tgt, lmax: int) -> np.ndarray:
    """G0(x, x') with x' expanded about ``origin_src`` and x about ``origin_tgt``.

    The outgoing waves about the source are re-expanded through the U block
    for X = origin_src - origin_tgt.
    """
    origin_src = np.asarray(origin_src, dtype=float)
    origin_tgt = np.asarray(origin_tgt, dtype=float)
    basis = ChannelBasis.spherical(kappa, lmax)
    U = _translation_matrix(kappa, tuple(origin_src - origin_tgt), lmax)
    reg_tgt = spherical_waves(basis, np.asarray(x, dtype=float) - origin_tgt)
    reg_src = spherical_waves(basis, np.asarray(x_prime, dtype=float) - origin_src)
    # out_a(x - O_src) = sum_b U_ba reg_b(x - O_tgt)
    out_src = U.T @ reg_tgt
    return _outer_sum(out_src, reg_src, basis.norms)


def greens_cylindrical_series(kappa: float, x, x_prime, nmax: int, kz_nodes: int = 200) -> np.ndarray:
    """G0 = int dk_z / 2 pi sum_n C_n E^out_n(x) (x) conj(E^reg_n(x')); needs rho > rho'."""
    rho = math.hypot(float(x[0]), float(x[1]))
    rho_prime = math.hypot(float(x_prime[0]), float(x_prime[1]))
    if rho <= rho_prime:
        raise ValueError("the outgoing point must lie further from the axis")
    t, w = np.polynomial.legendre.leggauss(kz_nodes)
    t, w = 0.5 * (t + 1.0), 0.5 * w
    scale = 1.0 / (rho - rho_prime)
    k_z = scale * t / (1.0 - t)
    jac = scale / (1.0 - t) ** 2
    total = np.zeros((3, 3), dtype=complex)
    for kz, weight in zip(k_z, w * jac):
        for sign in (1.0, -1.0):
            basis = ChannelBasis.cylindrical(kappa, sign * kz, nmax)
            out, log_out = cylindrical_waves_scaled(basis, x, regular=False)
            reg, log_reg = cylindrical_waves_scaled(basis, x_prime)
            # exp(-p (rho - rho')) <= 1
            total += weight * math.exp(log_out + log_reg) * _outer_sum(out, reg, basis.norms)
    return total / (2.0 * math.pi)


def greens_plane_series(kappa: float, x, x_prime, k_nodes: int = 120, angle_nodes: int = 64) -> np.ndarray:
    """G0 = int d^2k / (2 pi)^2 sum_P C_kP E^out(x) (x) conj(E^reg(x')); needs z > z'."""
    dz = float(x[2]) - float(x_prime[2])
    if dz <= 0:
        raise ValueError("the outgoing point must lie above the regular one")
    t, w = np.polynomial.legendre.leggauss(k_nodes)
    t, w = 0.5 * (t + 1.0), 0.5 * w
    scale = 1.0 / dz
    ks = scale * t / (1.0 - t)
    jac = scale / (1.0 - t) ** 2
    phis = 2.0 * math.pi * np.arange(angle_nodes) / angle_nodes
    total = np.zeros((3, 3), dtype=complex)
    for k, weight in zip(ks, w * jac):
        q = math.hypot(k, kappa)
        for phi in phis:
            k_perp = (k * math.cos(phi), k * math.sin(phi))
            for pol, c in ((Polarization.M, 1.0), (Polarization.E, -1.0)):
                out = plane_wave(kappa, k_perp, pol, x, regular=False)
                reg = plane_wave(kappa, k_perp, pol, x_prime, regular=True)
                total += weight * k * (2.0 * math.pi / angle_nodes) * c / (2.0 * q) * np.outer(out, np.conj(reg))
    return total / (2.0 * math.pi) ** 2


def plane_wave_from_spherical(kappa: float, k_perp, polarization: Polarization | str, point, lmax: int) -> np.ndarray:
    """sum_a D_{a,kP} E^reg_a(point), which reconstructs the regular plane wave."""
    basis = ChannelBasis.spherical(kappa, lmax)
    D = np.array([plane_to_spherical(kappa, k_perp, ch, polarization) for ch in basis.channels])
    return D @ spherical_waves(basis, point)


def plane_wave_from_cylindrical(
    kappa: float, k_y: float, k_z: float, polarization: Polarization | str, point, nmax: int
) -> np.ndarray:
    """sum_n D_{n,kP} E^reg_n(point) for a plane wave growing along +x."""
    basis = ChannelBasis.cylindrical(kappa, k_z, nmax)
    D = np.array([plane_to_cylindrical(kappa, k_y, k_z, n, Q, polarization) for n, Q in basis.channels])
    return D @ cylindrical_waves(basis, point)
