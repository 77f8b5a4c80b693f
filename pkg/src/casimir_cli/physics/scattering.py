"""On-shell scattering amplitudes at imaginary frequency.

Amplitudes are returned with continuum delta functions and 2*pi/L factors
stripped. Channel normalisation constants C_alpha live on ``ChannelBasis``:

    plane:        C_M = 1 / (2 q)    = -C_E,   q = sqrt(k_perp^2 + kappa^2)
    cylindrical:  C_E = 1 / (2 pi)   = -C_M
    spherical:    C_M = kappa        = -C_E

Sphere and cylinder amplitudes overflow or underflow for large orders, so
the builders work with (sign, log|F|) pairs and the public scalar functions
exponentiate at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import SelectionError
from . import specfun
from .materials import (
    MaterialKind,
    MaterialModel,
    Medium,
    atom_alpha,
    fresnel_from_response,
    relative_responses,
)


class Polarization(Enum):
    """Magnetic (TE) and electric (TM) multipoles."""

    M = "M"
    E = "E"

    @classmethod
    def parse(cls, value: "Polarization | str") -> "Polarization":
        return value if isinstance(value, cls) else cls(str(value).upper())


class BasisKind(Enum):
    PLANE = "plane"
    CYLINDRICAL = "cylindrical"
    SPHERICAL = "spherical"


POLARIZATIONS = (Polarization.M, Polarization.E)


@dataclass(frozen=True)
class ChannelBasis:
    """A truncated set of partial-wave channels at fixed kappa.

    Channel labels are ``(l, m, P)`` for spherical, ``(n, P)`` for
    cylindrical (at a single ``k_z``) and ``(i, P)`` for plane waves, where
    ``i`` indexes a row of ``k_perp``.
    """

    kind: BasisKind
    kappa: float
    channels: tuple[tuple, ...]
    k_z: float = 0.0
    k_perp: np.ndarray | None = field(default=None, repr=False, compare=False)
    weights: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.channels)) != len(self.channels):
            raise ValueError("channel basis contains duplicate channels")
        if self.kind is BasisKind.PLANE and self.k_perp is None:
            raise ValueError("plane basis needs k_perp samples")

    def __len__(self) -> int:
        return len(self.channels)

    @classmethod
    def spherical(
        cls,
        kappa: float,
        lmax: int,
        m: int | None = None,
        polarizations: tuple[Polarization, ...] = POLARIZATIONS,
    ) -> "ChannelBasis":
        """Spherical channels l = 1..lmax, all m (or a single m block)."""
        chans = []
        for pol in polarizations:
            for l in range(1, lmax + 1):
                ms = range(-l, l + 1) if m is None else ([m] if abs(m) <= l else [])
                chans.extend((l, mm, pol) for mm in ms)
        return cls(BasisKind.SPHERICAL, kappa, tuple(chans))

    @classmethod
    def cylindrical(
        cls,
        kappa: float,
        k_z: float,
        nmax: int,
        polarizations: tuple[Polarization, ...] = POLARIZATIONS,
    ) -> "ChannelBasis":
        chans = tuple((n, pol) for pol in polarizations for n in range(-nmax, nmax + 1))
        return cls(BasisKind.CYLINDRICAL, kappa, chans, k_z=k_z)

    @classmethod
    def plane(
        cls,
        kappa: float,
        k_perp: np.ndarray,
        weights: np.ndarray | None = None,
        polarizations: tuple[Polarization, ...] = POLARIZATIONS,
    ) -> "ChannelBasis":
        """Plane-wave channels on a grid of transverse wave vectors (N, 2)."""
        k_perp = np.atleast_2d(np.asarray(k_perp, dtype=float))
        chans = tuple((i, pol) for pol in polarizations for i in range(k_perp.shape[0]))
        return cls(BasisKind.PLANE, kappa, chans, k_perp=k_perp, weights=weights)

    def polarization(self, index: int) -> Polarization:
        return self.channels[index][-1]

    def index(self, channel: tuple) -> int:
        return self.channels.index(channel)

    @property
    def norms(self) -> np.ndarray:
        """C_alpha for every channel, in channel order."""
        signs = np.array([1.0 if ch[-1] is Polarization.M else -1.0 for ch in self.channels])
        match self.kind:
            case BasisKind.SPHERICAL:
                return signs * self.kappa
            case BasisKind.CYLINDRICAL:
                return -signs / (2.0 * np.pi)
            case BasisKind.PLANE:
                idx = np.array([ch[0] for ch in self.channels])
                k2 = np.sum(self.k_perp[idx] ** 2, axis=1)
                return signs / (2.0 * np.sqrt(k2 + self.kappa**2))
        raise AssertionError(self.kind)


@dataclass(frozen=True)
class AmplitudeBlock:
    """Scattering amplitude matrix of one body at fixed kappa.

    ``values`` is 1-D for channel-diagonal storage and 2-D otherwise. The
    physical matrix is ``values * exp(log_scale)``.
    """

    basis: ChannelBasis
    values: np.ndarray
    part: str = "ee"
    log_scale: float = 0.0

    def __post_init__(self) -> None:
        if self.part not in ("ee", "ei", "ie", "ii"):
            raise ValueError(f"unknown amplitude part {self.part!r}")
        n = len(self.basis)
        shape = np.shape(self.values)
        if shape not in ((n,), (n, n)):
            raise ValueError(f"amplitude shape {shape} does not match basis of size {n}")

    @property
    def kappa(self) -> float:
        return self.basis.kappa

    @property
    def is_diagonal(self) -> bool:
        return np.ndim(self.values) == 1

    def dense(self) -> np.ndarray:
        """Scaled matrix (without the ``log_scale`` factor)."""
        return np.diag(self.values) if self.is_diagonal else np.asarray(self.values)


# ---------------------------------------------------------------------------
# Plates
# ---------------------------------------------------------------------------


def plate_amplitude(
    material: MaterialModel,
    kappa: float,
    k_perp,
    polarization: Polarization | str,
    medium: Medium | None = None,
):
    """Reflection amplitude r^P(i c kappa, x) of a half-space.

    Diagonal in k_perp and polarization; cross-polarization entries vanish.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    pol = Polarization.parse(polarization)
    medium = medium or Medium()
    eps, mu = relative_responses(material, medium, kappa)
    k = np.asarray(k_perp, dtype=float)
    x = kappa / np.sqrt(k * k + kappa * kappa)
    r_m, r_e = fresnel_from_response(eps, mu, x)
    out = r_m if pol is Polarization.M else r_e
    return float(out) if np.ndim(out) == 0 else out


def plate_block(material: MaterialModel, basis: ChannelBasis, medium: Medium | None = None) -> AmplitudeBlock:
    """Diagonal plate amplitude on a plane-wave basis."""
    if basis.kind is not BasisKind.PLANE:
        raise ValueError("plate amplitudes need a plane-wave basis")
    k = np.linalg.norm(basis.k_perp, axis=1)
    r = {pol: plate_amplitude(material, basis.kappa, k, pol, medium) for pol in POLARIZATIONS}
    values = np.array([r[ch[1]][ch[0]] for ch in basis.channels], dtype=float)
    return AmplitudeBlock(basis, values)


# ---------------------------------------------------------------------------
# Perfectly conducting cylinders
# ---------------------------------------------------------------------------


def pec_cylinder_log(R: float, p, n, polarization: Polarization | str, interior: bool = False):
    """(sign, log|F|) of the PEC cylinder amplitude, vectorised over p and n."""
    pol = Polarization.parse(polarization)
    x = R * np.asarray(p, dtype=float)
    order = np.abs(np.asarray(n))
    log_ratio = specfun.log_bessel_i(order, x) - specfun.log_bessel_k(order, x)
    if pol is Polarization.M:
        # I'/K' = (I/K) (I'/I) / (K'/K); K'/K < 0.
        deriv = specfun.bessel_i_logderiv(order, x) / specfun.bessel_k_logderiv(order, x)
        log_ratio = log_ratio + np.log(np.abs(deriv))
        sign = -np.sign(deriv)
    else:
        sign = -np.ones_like(log_ratio)
    if interior:
        log_ratio = -log_ratio
    return sign, log_ratio


def pec_cylinder_exterior(R: float, p: float, n: int, polarization: Polarization | str) -> float:
    """Exterior amplitude: -I_n/K_n (E) or -I_n'/K_n' (M) at R p."""
    if R <= 0 or p <= 0:
        raise ValueError("R and p must be positive")
    sign, log_abs = pec_cylinder_log(R, p, n, polarization)
    return float(sign * np.exp(log_abs))


def pec_cylinder_interior(R: float, p: float, n: int, polarization: Polarization | str) -> float:
    """Interior amplitude: -K_n/I_n (E) or -K_n'/I_n' (M), the reciprocal."""
    if R <= 0 or p <= 0:
        raise ValueError("R and p must be positive")
    sign, log_abs = pec_cylinder_log(R, p, n, polarization, interior=True)
    return float(sign * np.exp(log_abs))


def pec_cylinder_block(R: float, basis: ChannelBasis, interior: bool = False) -> AmplitudeBlock:
    """Diagonal PEC cylinder amplitude on a cylindrical basis at one k_z.

    The largest |F| is kept in ``log_scale`` so the stored values are at
    most 1 in magnitude.
    """
    if basis.kind is not BasisKind.CYLINDRICAL:
        raise ValueError("cylinder amplitudes need a cylindrical basis")
    p = math.hypot(basis.kappa, basis.k_z)
    signs = np.empty(len(basis))
    logs = np.empty(len(basis))
    for i, (n, pol) in enumerate(basis.channels):
        signs[i], logs[i] = pec_cylinder_log(R, p, n, pol, interior)
    log_scale = float(np.max(logs))
    with np.errstate(under="ignore"):
        values = signs * np.exp(logs - log_scale)
    return AmplitudeBlock(basis, values, part="ii" if interior else "ee", log_scale=log_scale)


def dielectric_cylinder_smallR(
    material: MaterialModel,
    R: float,
    kappa: float,
    k_z: float,
    n: int,
    polarization: Polarization | str,
    polarization_out: Polarization | str,
    medium: Medium | None = None,
) -> float:
    """Leading small-radius amplitude f_{k_z n P P'} of a dielectric cylinder.

    Inside a medium the wave number in the formulas is n_m kappa while the
    responses are taken relative to the medium at kappa.
    """
    if abs(n) > 1:
        raise SelectionError("small-radius cylinder amplitudes exist only for |n| <= 1")
    if material.is_pec:
        raise ValueError("perfect conductor cylinder: use pec_cylinder_logmode instead")
    medium = medium or Medium()
    eps, mu = relative_responses(material, medium, kappa)
    kappa = medium.index(kappa) * kappa
    P = Polarization.parse(polarization)
    Q = Polarization.parse(polarization_out)
    R2 = R * R

    if n == 0:
        if P is not Q:
            return 0.0
        response = mu if P is Polarization.M else eps
        return 0.5 * (kappa**2 + k_z**2) * R2 * (1.0 - response)

    denom = 2.0 * (1.0 + eps) * (1.0 + mu)
    if P is Q is Polarization.M:
        return (k_z**2 * (1 + eps) * (1 - mu) - kappa**2 * (1 - eps) * (1 + mu)) / denom * R2
    if P is Q is Polarization.E:
        return (k_z**2 * (1 - eps) * (1 + mu) - kappa**2 * (1 + eps) * (1 - mu)) / denom * R2
    mixing = kappa * k_z * (eps * mu - 1.0) / ((1.0 + eps) * (1.0 + mu)) * R2
    # f_{1ME} = f_{-1EM} = mixing, f_{1EM} = f_{-1ME} = -mixing
    same_sign = (n == 1) == (P is Polarization.M)
    return mixing if same_sign else -mixing


def pec_cylinder_logmode(R: float, d: float, kappa: float = 0.0, k_z: float = 0.0) -> float:
    """Leading n = 0 E-mode amplitude 1/log(R/d) of a thin PEC cylinder."""
    if d <= R:
        raise ValueError(f"separation d = {d} must exceed the radius R = {R}")
    return 1.0 / math.log(R / d)


# ---------------------------------------------------------------------------
# Spheres and atoms
# ---------------------------------------------------------------------------


def _log_sph_ratio(l, z):
    """log(i_l(z) / k_l(z))."""
    return specfun.log_sph_bessel_i(l, z) - specfun.log_sph_bessel_k(l, z)


def mie_sphere_log(
    material: MaterialModel,
    R: float,
    kappa: float,
    l,
    polarization: Polarization | str,
    medium: Medium | None = None,
):
    """(sign, log|F|) of the exterior Mie amplitude, vectorised over l.

    With z = kappa R and w = n z the amplitude factorises as

        F = -(i_l(z)/k_l(z)) * [a(w) - s b_i(z)] / [a(w) - s b_k(z)]

    where a(w) = 1 + w i_l'(w)/i_l(w), b_f(z) = 1 + z f'(z)/f(z) and s is
    mu (M) or eps (E). A vacuum sphere gives exactly zero.
    """
    pol = Polarization.parse(polarization)
    medium = medium or Medium()
    l = np.asarray(l)
    if np.any(l < 1):
        raise SelectionError("Mie amplitudes need l >= 1")
    z = medium.index(kappa) * kappa * R
    log_ratio = _log_sph_ratio(l, z)
    b_i = 1.0 + z * specfun.sph_bessel_i_logderiv(l, z)
    b_k = 1.0 + z * specfun.sph_bessel_k_logderiv(l, z)

    if material.is_pec:
        factor = b_i / b_k if pol is Polarization.E else np.ones_like(b_i)
    else:
        eps, mu = relative_responses(material, medium, kappa)
        s = mu if pol is Polarization.M else eps
        n_b = math.sqrt(eps * mu)
        if n_b == 0.0:
            # w i_l'(w) / i_l(w) -> l as w -> 0
            a = 1.0 + l
        else:
            w = n_b * z
            a = 1.0 + w * specfun.sph_bessel_i_logderiv(l, w)
        factor = (a - s * b_i) / (a - s * b_k)
    sign = -np.sign(factor)
    with np.errstate(divide="ignore"):
        log_abs = log_ratio + np.log(np.abs(factor))
    return sign, log_abs


def mie_sphere_exterior(
    material: MaterialModel,
    R: float,
    kappa: float,
    l: int,
    polarization: Polarization | str,
    medium: Medium | None = None,
) -> float:
    """Exterior Mie amplitude F^{ee}_{lmP,lmP} (independent of m)."""
    if R <= 0 or kappa <= 0:
        raise ValueError("R and kappa must be positive")
    if material.kind is MaterialKind.VACUUM:
        return 0.0
    sign, log_abs = mie_sphere_log(material, R, kappa, l, polarization, medium)
    return float(sign * np.exp(log_abs))


def mie_block(
    material: MaterialModel,
    R: float,
    basis: ChannelBasis,
    medium: Medium | None = None,
) -> AmplitudeBlock:
    """Diagonal Mie amplitude on a spherical basis, scaled by exp(-2 kappa R)."""
    if basis.kind is not BasisKind.SPHERICAL:
        raise ValueError("Mie amplitudes need a spherical basis")
    ls = np.array([ch[0] for ch in basis.channels])
    values = np.zeros(len(basis))
    if material.kind is MaterialKind.VACUUM:
        return AmplitudeBlock(basis, values)
    n_m = (medium or Medium()).index(basis.kappa)
    log_scale = 2.0 * n_m * basis.kappa * R
    for pol in POLARIZATIONS:
        mask = np.array([ch[2] is pol for ch in basis.channels])
        if np.any(mask):
            sign, log_abs = mie_sphere_log(material, R, basis.kappa, ls[mask], pol, medium)
            values[mask] = sign * np.exp(log_abs - log_scale)
    return AmplitudeBlock(basis, values, log_scale=log_scale)


def atom_amplitude(alpha0: float, d10: float, kappa: float) -> float:
    """E-mode l = 1 amplitude (2/3) alpha(kappa) kappa^3 of a two-level atom."""
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    alpha = alpha0 / (1.0 + (kappa * d10) ** 2)
    return 2.0 / 3.0 * alpha * kappa**3


def atom_block(atom: MaterialModel, basis: ChannelBasis) -> AmplitudeBlock:
    """Atom amplitude on a spherical basis; only l = 1 E channels are nonzero."""
    if basis.kind is not BasisKind.SPHERICAL:
        raise ValueError("atom amplitudes need a spherical basis")
    # atom_alpha uses u = kappa d with the same d in the rescaling, so pass d = 1
    alpha = float(atom_alpha(atom, basis.kappa, 1.0))
    value = 2.0 / 3.0 * alpha * basis.kappa**3
    values = np.array(
        [value if (ch[0] == 1 and ch[2] is Polarization.E) else 0.0 for ch in basis.channels]
    )
    return AmplitudeBlock(basis, values)
