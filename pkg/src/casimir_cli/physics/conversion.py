"""Conversion matrices D from vector plane waves to spherical or cylindrical waves.

Regular plane waves expand as

    E^reg_{k P}(x) = sum_a D_{a, k P} E^reg_a(x)

and an amplitude given in a compact basis is carried into the plane basis by

    F_{k P, k' P'} = sum (C_{k P} / C_Q) conj(D_{Q, k P}) F_{Q Q'} D_{Q', k' P'}.

For the spherical case the Legendre function at t = q / kappa >= 1 is the
Ferrers function continued through sqrt(1 - t^2) -> i sqrt(t^2 - 1), i.e.
(-i)^m times the real ``specfun.assoc_legendre_ge1`` value; the prime on
the M-M entry is d/dt of that function. Negative m uses the Hobson
relation P^{-m} = (l-m)!/(l+m)! P^m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ..errors import SelectionError
from . import specfun
from .scattering import AmplitudeBlock, BasisKind, ChannelBasis, Polarization


@dataclass(frozen=True)
class ConversionBlock:
    """D matrix with rows in the compact basis and columns in the plane basis."""

    source: ChannelBasis
    target: ChannelBasis
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if self.source.kind is not BasisKind.PLANE:
            raise ValueError("conversion source must be a plane-wave basis")
        if self.matrix.shape != (len(self.target), len(self.source)):
            raise ValueError("conversion matrix does not match its bases")

    @property
    def kappa(self) -> float:
        return self.source.kappa

    @property
    def c_ratio(self) -> np.ndarray:
        """C_{kP} / C_Q, shape (plane channels, compact channels)."""
        return self.source.norms[:, None] / self.target.norms[None, :]


def spherical_prefactor(l: int, m: int) -> float:
    """sqrt(4 pi (2l+1) (l-m)! / (l (l+1) (l+m)!))."""
    log_value = 0.5 * (
        math.log(4.0 * math.pi * (2 * l + 1) / (l * (l + 1)))
        + special.gammaln(l - m + 1)
        - special.gammaln(l + m + 1)
    )
    return math.exp(log_value)


def _legendre_continued(l: int, m: int, t: float) -> tuple[float, float]:
    """Real Hobson P_l^m(t) and its t-derivative for any |m| <= l."""
    value, derivative = specfun.assoc_legendre_ge1(l, abs(m), t)
    if m < 0:
        ratio = math.exp(special.gammaln(l + m + 1) - special.gammaln(l - m + 1))
        value, derivative = ratio * value, ratio * derivative
    return value, derivative


def plane_to_spherical(
    kappa: float,
    k_perp,
    channel: tuple,
    plane_polarization: Polarization | str,
) -> complex:
    """D_{lmQ, k P} for a regular plane wave with transverse wave vector k_perp."""
    l, m, Q = channel
    Q = Polarization.parse(Q)
    P = Polarization.parse(plane_polarization)
    if l < 1 or abs(m) > l:
        raise SelectionError(f"invalid spherical channel l={l}, m={m}")
    kx, ky = (float(v) for v in k_perp)
    k = math.hypot(kx, ky)
    if k == 0.0:
        raise ValueError("conversion needs a nonzero transverse wave vector")
    t = math.sqrt(k * k + kappa * kappa) / kappa
    value, derivative = _legendre_continued(l, m, t)
    phase = (-1j) ** (m % 4) * np.exp(-1j * m * math.atan2(ky, kx))
    pref = spherical_prefactor(l, m)
    same = pref * (k / kappa) * phase * derivative
    mixed = pref * 1j * m * (kappa / k) * phase * value
    if Q is P:
        return complex(same)
    return complex(mixed if Q is Polarization.E else -mixed)


def plane_to_cylindrical(
    kappa: float,
    k_y: float,
    k_z: float,
    n: int,
    polarization: Polarization | str,
    plane_polarization: Polarization | str,
) -> complex:
    """D_{k_z n Q, k P} for plane waves growing along +x (diagonal in k_z).

    With p = sqrt(kappa^2 + k_z^2) and xi = k_y / p, the n dependence is
    (sqrt(1 + xi^2) + xi)^n.
    """
    Q = Polarization.parse(polarization)
    P = Polarization.parse(plane_polarization)
    K = math.hypot(k_y, k_z)
    if K == 0.0:
        raise ValueError("conversion needs a nonzero transverse wave vector")
    p = math.hypot(kappa, k_z)
    xi = k_y / p
    root = math.sqrt(1.0 + xi * xi)
    growth = math.exp(n * math.asinh(xi))
    same = -1j * (k_z / K) * root * growth
    mixed = 1j * (kappa / K) * xi * growth
    if Q is P:
        return complex(same)
    return complex(mixed if Q is Polarization.E else -mixed)


def plane_to_spherical_block(plane: ChannelBasis, spherical: ChannelBasis) -> ConversionBlock:
    if spherical.kind is not BasisKind.SPHERICAL:
        raise ValueError("target basis must be spherical")
    if plane.kappa != spherical.kappa:
        raise ValueError("bases are defined at different kappa")
    matrix = np.empty((len(spherical), len(plane)), dtype=complex)
    for j, (idx, P) in enumerate(plane.channels):
        k = plane.k_perp[idx]
        for i, channel in enumerate(spherical.channels):
            matrix[i, j] = plane_to_spherical(plane.kappa, k, channel, P)
    return ConversionBlock(plane, spherical, matrix)


def plane_to_cylindrical_block(plane: ChannelBasis, cylindrical: ChannelBasis) -> ConversionBlock:
    """Plane rows of ``k_perp`` are (k_y, k_z) pairs sharing the cylinder's k_z."""
    if cylindrical.kind is not BasisKind.CYLINDRICAL:
        raise ValueError("target basis must be cylindrical")
    if plane.kappa != cylindrical.kappa:
        raise ValueError("bases are defined at different kappa")
    if not np.allclose(plane.k_perp[:, 1], cylindrical.k_z):
        raise ValueError("plane waves must share the cylindrical basis k_z")
    matrix = np.empty((len(cylindrical), len(plane)), dtype=complex)
    for j, (idx, P) in enumerate(plane.channels):
        k_y, k_z = plane.k_perp[idx]
        for i, (n, Q) in enumerate(cylindrical.channels):
            matrix[i, j] = plane_to_cylindrical(plane.kappa, k_y, k_z, n, Q, P)
    return ConversionBlock(plane, cylindrical, matrix)


def conjugate_by_D(amplitude: AmplitudeBlock, D: ConversionBlock) -> AmplitudeBlock:
    """Carry a compact-basis amplitude into the plane-wave basis of ``D``."""
    if amplitude.basis != D.target:
        raise ValueError("amplitude basis does not match the conversion target")
    F = amplitude.dense() * math.exp(amplitude.log_scale)
    left = D.c_ratio * np.conj(D.matrix).T
    return AmplitudeBlock(D.source, left @ F @ D.matrix, part=amplitude.part)
