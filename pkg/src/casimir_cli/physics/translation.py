"""Translation matrices between displaced coordinate origins.

A translation block built for displacement ``X = O_src - O_tgt`` re-expands
waves about the source origin in regular waves about the target origin:

    E^out_a(x_src) = sum_b U_ba E^reg_b(x_tgt)      (U, outgoing -> regular)
    E^reg_a(x_src) = sum_b V_ba E^reg_b(x_tgt)      (V, regular -> regular)

Rows index target channels and columns index source channels. W is the
C-weighted adjoint of V, W_ab = conj(V_ba) C_a / C_b.

Bessel factors are stored exponent-scaled: the physical block is
``matrix * exp(log_scale)``.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import GeometryError, SelectionError
from . import specfun
from .scattering import BasisKind, ChannelBasis, Polarization

logger = logging.getLogger(__name__)


class TranslationKind(Enum):
    U = "U"
    V = "V"
    W = "W"


@dataclass(frozen=True)
class Displacement:
    """Vector between two coordinate origins, in length units."""

    x: float
    y: float
    z: float

    @classmethod
    def of(cls, vector) -> "Displacement":
        x, y, z = (float(v) for v in vector)
        return cls(x, y, z)

    @classmethod
    def along_z(cls, distance: float) -> "Displacement":
        return cls(0.0, 0.0, float(distance))

    def __neg__(self) -> "Displacement":
        return Displacement(-self.x, -self.y, -self.z)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    @property
    def perp(self) -> float:
        """Distance |X_perp| from the z axis."""
        return math.hypot(self.x, self.y)

    @property
    def azimuth(self) -> float:
        return math.atan2(self.y, self.x)

    @property
    def polar(self) -> float:
        norm = self.norm
        return 0.0 if norm == 0.0 else math.acos(max(-1.0, min(1.0, self.z / norm)))


@dataclass(frozen=True)
class TranslationBlock:
    """U, V or W matrix on a channel basis at fixed kappa.

    ``matrix`` is 1-D for channel-diagonal (plane-wave) blocks.
    """

    kind: TranslationKind
    basis: ChannelBasis
    matrix: np.ndarray
    log_scale: float = 0.0

    @property
    def kappa(self) -> float:
        return self.basis.kappa

    @property
    def is_diagonal(self) -> bool:
        return np.ndim(self.matrix) == 1

    def dense(self) -> np.ndarray:
        """Physical matrix, exponentiating the common scale."""
        m = np.diag(self.matrix) if self.is_diagonal else np.asarray(self.matrix)
        return m * math.exp(self.log_scale)

    def __neg__(self) -> "TranslationBlock":
        return dataclasses.replace(self, matrix=-np.asarray(self.matrix))


# ---------------------------------------------------------------------------
# Plane-wave basis
# ---------------------------------------------------------------------------


def _plane_exponent(kappa: float, k_perp, X: Displacement, sign: float):
    k = np.atleast_2d(np.asarray(k_perp, dtype=float))
    q = np.sqrt(np.sum(k * k, axis=1) + kappa * kappa)
    phase = k[:, 0] * X.x + k[:, 1] * X.y
    return sign * 1j * phase - q * X.z


def plane_V(kappa: float, k_perp, polarization: Polarization | str, X: Displacement) -> complex:
    """exp(-i k.X_perp - q X_z) for X pointing upward from the lower object."""
    Polarization.parse(polarization)
    if X.z <= 0:
        raise GeometryError("plane translation needs a positive vertical separation")
    return complex(np.exp(_plane_exponent(kappa, k_perp, X, -1.0))[0])


def plane_W(kappa: float, k_perp, polarization: Polarization | str, X: Displacement) -> complex:
    """exp(+i k.X_perp - q X_z), the C-weighted adjoint of ``plane_V``."""
    Polarization.parse(polarization)
    if X.z <= 0:
        raise GeometryError("plane translation needs a positive vertical separation")
    return complex(np.exp(_plane_exponent(kappa, k_perp, X, 1.0))[0])


def _plane_block(kind: TranslationKind, basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    if basis.kind is not BasisKind.PLANE:
        raise ValueError("plane translations need a plane-wave basis")
    if X.z <= 0:
        raise GeometryError("plane translation needs a positive vertical separation")
    idx = np.array([ch[0] for ch in basis.channels])
    sign = -1.0 if kind is TranslationKind.V else 1.0
    values = np.exp(_plane_exponent(basis.kappa, basis.k_perp[idx], X, sign))
    return TranslationBlock(kind, basis, values)


def plane_V_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    return _plane_block(TranslationKind.V, basis, X)


def plane_W_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    return _plane_block(TranslationKind.W, basis, X)


# ---------------------------------------------------------------------------
# Cylindrical basis
# ---------------------------------------------------------------------------


def _cyl_phase(k_z: float, n_diff, X: Displacement, z_sign: float):
    return np.exp(z_sign * 1j * k_z * X.z - 1j * n_diff * X.azimuth)


def cyl_U(kappa: float, k_z: float, n: int, n_prime: int, X: Displacement) -> complex:
    """K_{n-n'}(|X_perp| p) exp(-i k_z X_z - i (n-n') theta) (-1)^{n'}."""
    if X.perp == 0.0:
        raise GeometryError("outgoing cylindrical translation needs a lateral displacement")
    p = math.hypot(kappa, k_z)
    K = specfun.bessel_k(abs(n - n_prime), X.perp * p).value
    return complex(K * _cyl_phase(k_z, n - n_prime, X, -1.0) * (-1) ** (n_prime % 2))


def cyl_V(kappa: float, k_z: float, n: int, n_prime: int, X: Displacement) -> complex:
    """I_{n-n'}(|X_perp| p) exp(-i k_z X_z - i (n-n') theta) (-1)^{n+n'}."""
    p = math.hypot(kappa, k_z)
    order = abs(n - n_prime)
    if X.perp == 0.0:
        I = 1.0 if order == 0 else 0.0
    else:
        I = specfun.bessel_i(order, X.perp * p).value
    return complex(I * _cyl_phase(k_z, n - n_prime, X, -1.0) * (-1) ** ((n + n_prime) % 2))


def cyl_W(kappa: float, k_z: float, n: int, n_prime: int, X: Displacement) -> complex:
    """I_{n-n'}(|X_perp| p) exp(+i k_z X_z - i (n-n') theta) (-1)^{n+n'}."""
    return cyl_V(kappa, -k_z, n, n_prime, X)


def _cyl_block(kind: TranslationKind, basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    if basis.kind is not BasisKind.CYLINDRICAL:
        raise ValueError("cylindrical translations need a cylindrical basis")
    p = math.hypot(basis.kappa, basis.k_z)
    x = X.perp * p
    ns = np.array([ch[0] for ch in basis.channels])
    pols = [ch[1] for ch in basis.channels]
    diff = ns[:, None] - ns[None, :]
    same_pol = np.array([[a is b for b in pols] for a in pols])

    if kind is TranslationKind.U:
        if x == 0.0:
            raise GeometryError("outgoing cylindrical translation needs a lateral displacement")
        radial, _ = specfun.bessel_k_scaled(np.abs(diff), x)
        log_scale = -x
        z_sign, parity = -1.0, ns[None, :]
    else:
        if x == 0.0:
            radial, log_scale = (diff == 0).astype(float), 0.0
        else:
            radial, _ = specfun.bessel_i_scaled(np.abs(diff), x)
            log_scale = x
        z_sign = -1.0 if kind is TranslationKind.V else 1.0
        parity = ns[:, None] + ns[None, :]

    sign = np.where(parity % 2, -1.0, 1.0)
    matrix = radial * _cyl_phase(basis.k_z, diff, X, z_sign) * sign * same_pol
    return TranslationBlock(kind, basis, matrix, log_scale)


def cyl_U_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    return _cyl_block(TranslationKind.U, basis, X)


def cyl_V_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    return _cyl_block(TranslationKind.V, basis, X)


def cyl_W_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    return _cyl_block(TranslationKind.W, basis, X)


# ---------------------------------------------------------------------------
# Spherical basis
# ---------------------------------------------------------------------------


class _SphericalSums:
    """Radial and angular tables shared by all elements of one spherical block.

    ``radial[l'']`` holds k_{l''}(kappa |X|) exp(kappa |X|) for outgoing
    translations and i_{l''}(kappa |X|) (-1)^{l''} exp(-kappa |X|) for
    regular ones; the removed exponential is returned as ``log_scale``.
    """

    def __init__(self, kappa: float, X: Displacement, lmax: int, outgoing: bool):
        self.kappa = kappa
        self.X = X
        self.outgoing = outgoing
        z = kappa * X.norm
        top = 2 * lmax + 1
        orders = np.arange(top + 1)
        if outgoing:
            self.radial = specfun.sph_bessel_k_scaled(orders, z)[0]
            self.log_scale = -z
        elif z == 0.0:
            self.radial = (orders == 0).astype(float)
            self.log_scale = 0.0
        else:
            self.radial = specfun.sph_bessel_i_scaled(orders, z)[0] * np.where(orders % 2, -1.0, 1.0)
            self.log_scale = z
        self.top = top
        self.ylm, _ = specfun.spherical_harmonic_table(top, X.polar, X.azimuth)

    def _sum(self, lp: int, mp: int, l: int, m: int, weighted: bool) -> complex:
        if abs(m) > l or abs(mp) > lp:
            return 0.0j
        mu = m - mp
        total = 0.0j
        for lpp in range(abs(l - lp), l + lp + 1, 2):
            if abs(mu) > lpp:
                continue
            w = specfun.wigner3j(l, lp, lpp, 0, 0, 0)
            if w == 0.0:
                continue
            w *= specfun.wigner3j(l, lp, lpp, m, -mp, mu)
            if w == 0.0:
                continue
            if weighted:
                w *= l * (l + 1) + lp * (lp + 1) - lpp * (lpp + 1)
            total += math.sqrt(2 * lpp + 1) * w * self.radial[lpp] * self.ylm[lpp, mu + self.top]
        sign = (-1) ** ((m + (l if self.outgoing else 0)) % 2)
        return sign * total

    def scalar(self, lp: int, mp: int, l: int, m: int) -> complex:
        """The scalar coefficient A (outgoing) or B (regular)."""
        return math.sqrt(4.0 * math.pi * (2 * l + 1) * (2 * lp + 1)) * self._sum(lp, mp, l, m, False)

    def same(self, lp: int, mp: int, l: int, m: int) -> complex:
        """MM (= EE) element."""
        norm = math.pi * (2 * l + 1) * (2 * lp + 1) / (l * (l + 1) * lp * (lp + 1))
        return math.sqrt(norm) * self._sum(lp, mp, l, m, True)

    def mixed(self, lp: int, mp: int, l: int, m: int) -> complex:
        """EM (= -ME) element: row E, column M."""
        lam_plus = math.sqrt((l - m) * (l + m + 1))
        lam_minus = math.sqrt((l + m) * (l - m + 1))
        X = self.X
        bracket = (
            0.5 * complex(X.x, -X.y) * lam_plus * self.scalar(lp, mp, l, m + 1)
            + 0.5 * complex(X.x, X.y) * lam_minus * self.scalar(lp, mp, l, m - 1)
            + m * X.z * self.scalar(lp, mp, l, m)
        )
        return -1j * self.kappa / math.sqrt(l * (l + 1) * lp * (lp + 1)) * bracket

    def element(self, row: tuple, col: tuple) -> complex:
        lp, mp, P_row = row
        l, m, P_col = col
        if P_row is P_col:
            return self.same(lp, mp, l, m)
        value = self.mixed(lp, mp, l, m)
        return value if P_row is Polarization.E else -value


def _check_channel(channel: tuple) -> tuple:
    l, m, P = channel
    if l < 1 or abs(m) > l:
        raise SelectionError(f"invalid spherical channel l={l}, m={m}")
    return (l, m, Polarization.parse(P))


def sph_U(kappa: float, row: tuple, col: tuple, X: Displacement) -> complex:
    """Outgoing-to-regular element U_{(l'm'P'),(lmP)} for X = O_src - O_tgt."""
    if X.norm == 0.0:
        raise GeometryError("outgoing spherical translation needs a nonzero displacement")
    row, col = _check_channel(row), _check_channel(col)
    sums = _SphericalSums(kappa, X, max(row[0], col[0]), outgoing=True)
    return sums.element(row, col) * math.exp(sums.log_scale)


def sph_V(kappa: float, row: tuple, col: tuple, X: Displacement) -> complex:
    """Regular-to-regular element V_{(l'm'P'),(lmP)}."""
    row, col = _check_channel(row), _check_channel(col)
    sums = _SphericalSums(kappa, X, max(row[0], col[0]), outgoing=False)
    return sums.element(row, col) * math.exp(sums.log_scale)


def sph_W(kappa: float, row: tuple, col: tuple, X: Displacement) -> complex:
    """W_{ab} = conj(V_{ba}) with a minus sign between different polarizations."""
    row, col = _check_channel(row), _check_channel(col)
    value = np.conj(sph_V(kappa, col, row, X))
    return complex(value if row[2] is col[2] else -value)


def _sph_block(basis: ChannelBasis, X: Displacement, outgoing: bool) -> tuple[np.ndarray, float]:
    if basis.kind is not BasisKind.SPHERICAL:
        raise ValueError("spherical translations need a spherical basis")
    lmax = max(ch[0] for ch in basis.channels)
    sums = _SphericalSums(basis.kappa, X, lmax, outgoing)
    cache: dict[tuple, tuple[complex, complex]] = {}
    n = len(basis)
    matrix = np.zeros((n, n), dtype=complex)
    for i, (lp, mp, P_row) in enumerate(basis.channels):
        for j, (l, m, P_col) in enumerate(basis.channels):
            key = (lp, mp, l, m)
            if key not in cache:
                cache[key] = (sums.same(lp, mp, l, m), sums.mixed(lp, mp, l, m))
            same, mixed = cache[key]
            if P_row is P_col:
                matrix[i, j] = same
            else:
                matrix[i, j] = mixed if P_row is Polarization.E else -mixed
    logger.debug("built %dx%d spherical block at kappa=%g, |X|=%g", n, n, basis.kappa, X.norm)
    return matrix, sums.log_scale


def sph_U_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    if X.norm == 0.0:
        raise GeometryError("outgoing spherical translation needs a nonzero displacement")
    matrix, log_scale = _sph_block(basis, X, outgoing=True)
    return TranslationBlock(TranslationKind.U, basis, matrix, log_scale)


def sph_V_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    matrix, log_scale = _sph_block(basis, X, outgoing=False)
    return TranslationBlock(TranslationKind.V, basis, matrix, log_scale)


def w_from_v(block: TranslationBlock) -> TranslationBlock:
    """W = V^dagger weighted by C_row / C_col."""
    if block.kind is not TranslationKind.V:
        raise ValueError("W is derived from a V block")
    c = block.basis.norms
    if block.is_diagonal:
        matrix = np.conj(block.matrix)
    else:
        matrix = np.conj(block.matrix).T * (c[:, None] / c[None, :])
    return TranslationBlock(TranslationKind.W, block.basis, matrix, block.log_scale)


def sph_W_block(basis: ChannelBasis, X: Displacement) -> TranslationBlock:
    return w_from_v(sph_V_block(basis, X))


# ---------------------------------------------------------------------------
# X blocks
# ---------------------------------------------------------------------------


class PairKind(Enum):
    """Relative placement of two bodies a and b."""

    OUTSIDE = "outside"
    A_ENCLOSES_B = "a_encloses_b"
    B_ENCLOSES_A = "b_encloses_a"
    PLANE_STACK = "plane_stack"  # a below b


_EXPECTED = {
    PairKind.OUTSIDE: (TranslationKind.U, TranslationKind.U),
    PairKind.A_ENCLOSES_B: (TranslationKind.W, TranslationKind.V),
    PairKind.B_ENCLOSES_A: (TranslationKind.V, TranslationKind.W),
    PairKind.PLANE_STACK: (TranslationKind.V, TranslationKind.W),
}


@dataclass(frozen=True)
class PairConfiguration:
    """Two bodies with bounding radii and center-to-center distance.

    Radii are ignored for ``PLANE_STACK``, where ``distance`` is the gap.
    """

    kind: PairKind
    radius_a: float = 0.0
    radius_b: float = 0.0
    distance: float = 0.0

    def validate(self) -> None:
        a, b, d = self.radius_a, self.radius_b, self.distance
        match self.kind:
            case PairKind.OUTSIDE:
                if d <= a + b:
                    raise GeometryError(f"bodies overlap: d = {d:g} <= {a + b:g}")
            case PairKind.A_ENCLOSES_B:
                if d + b >= a:
                    raise GeometryError(f"body b (R = {b:g}) at d = {d:g} is not inside R = {a:g}")
            case PairKind.B_ENCLOSES_A:
                if d + a >= b:
                    raise GeometryError(f"body a (R = {a:g}) at d = {d:g} is not inside R = {b:g}")
            case PairKind.PLANE_STACK:
                if d <= 0:
                    raise GeometryError("stacked plates need a positive gap")


def assemble_X(
    pair: PairConfiguration,
    into_a: TranslationBlock,
    into_b: TranslationBlock,
) -> tuple[TranslationBlock, TranslationBlock]:
    """Return (X^ab, X^ba), the negated translation blocks entering the determinant.

    ``into_a`` re-expands waves of b about the origin of a and ``into_b``
    the reverse. Outside bodies pair U with U, an enclosing body a pairs W
    (into a) with V (into b) and a plate stack with a below b pairs V with W.
    """
    pair.validate()
    expected = _EXPECTED[pair.kind]
    if (into_a.kind, into_b.kind) != expected:
        raise GeometryError(
            f"{pair.kind.value} needs ({expected[0].value}, {expected[1].value}) blocks, "
            f"got ({into_a.kind.value}, {into_b.kind.value})"
        )
    if into_a.kappa != into_b.kappa:
        raise ValueError("translation blocks are evaluated at different kappa")
    return -into_a, -into_b
