"""Energies of the built-in two-body configurations.

Each geometry comes with a ``*_pipeline`` returning the per-frequency
log-determinant as a :class:`~casimir_cli.compute.energy.Pipeline` (so that
temperature and a surrounding medium work everywhere) and an ``*_energy``
convenience function. The large-separation formulas are written out on
their own and share no code with the full pipelines.

Conventions: energies in hbar c per length unit, per unit area for plates
and per unit length for cylinders.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import integrate, linalg, special

from ..errors import ConfigError, DeterminantError
from ..models.geometry import (
    CylinderInCylinder,
    CylinderPlate,
    GeometryConfig,
    ParallelPlates,
    SpherePlate,
    TwoAtoms,
    TwoCylindersOuter,
)
from ..models.results import EnergyResult, QuadratureSpec, TruncationPolicy
from ..physics import specfun
from ..physics.materials import (
    MaterialModel,
    Medium,
    fresnel_from_response,
    permeability,
    permittivity,
    relative_responses,
    two_level_atom,
)
from ..physics.scattering import (
    POLARIZATIONS,
    ChannelBasis,
    Polarization,
    atom_block,
    dielectric_cylinder_smallR,
    mie_sphere_log,
    pec_cylinder_block,
    pec_cylinder_log,
    pec_cylinder_logmode,
    plate_block,
)
from ..physics.translation import (
    Displacement,
    PairConfiguration,
    PairKind,
    assemble_X,
    cyl_U_block,
    cyl_V_block,
    plane_V_block,
    plane_W_block,
    sph_U_block,
    w_from_v,
)
from .energy import (
    LogDet,
    Pipeline,
    apply_medium,
    integrate_energy,
    logdet,
    logdet_two_body,
    matsubara_free_energy,
)

logger = logging.getLogger(__name__)

M, E = Polarization.M, Polarization.E


@lru_cache(maxsize=32)
def _gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@lru_cache(maxsize=32)
def _gauss_laguerre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.laguerre.laggauss(n)


def _half_line(fn, scale: float, nodes: int = 48) -> float:
    """int_0^inf fn(k) dk with k = scale * t / (1 - t), Gauss-Legendre in t."""
    t, w = _gauss_legendre(nodes, 0.0, 1.0)
    k = scale * t / (1.0 - t)
    jac = scale / (1.0 - t) ** 2
    return math.fsum(wi * ji * fn(float(ki)) for wi, ji, ki in zip(w, jac, k))


def _static_responses(model: MaterialModel) -> tuple[float, float]:
    return permittivity(model, 0.0), permeability(model, 0.0)


# ---------------------------------------------------------------------------
# Two atoms
# ---------------------------------------------------------------------------


def _atom_bracket(u, alpha, d: float):
    """Longitudinal and transverse terms of log det at u = kappa d."""
    u = np.asarray(u, dtype=float)
    g = alpha**2 * np.exp(-2.0 * u) / d**6
    longitudinal = 4.0 * (1.0 + u) ** 2 * g
    transverse = (1.0 + u + u * u) ** 2 * g
    if np.any(longitudinal >= 1.0) or np.any(transverse >= 1.0):
        raise DeterminantError("atoms are too close for the dipole description")
    return np.log1p(-longitudinal) + 2.0 * np.log1p(-transverse)


def two_atoms_energy(d: float, alpha0: float, d10: float, mode: str = "full_log") -> float:
    """Energy of two identical two-level atoms at center distance d.

    ``full_log`` integrates the logarithm exactly in the dipole
    approximation; ``quadratic`` keeps the leading alpha^2 term,
    -(1 / pi d^7) int alpha(u)^2 (3 + 6u + 5u^2 + 2u^3 + u^4) e^{-2u} du.
    """
    TwoAtoms(d, alpha0, d10, mode).validate()
    atom = two_level_atom(alpha0, d10)
    s = d / d10
    knee = 10.0 * min(s, 1.0)

    def alpha(u):
        return s * s * atom.alpha0 / (s * s + u * u)

    match mode:
        case "quadratic":
            if alpha0 / d**3 > 1e-2:
                logger.warning("alpha0 / d^3 = %.3g is not small; the quadratic mode is unreliable", alpha0 / d**3)

            def integrand(u: float) -> float:
                poly = 3.0 + u * (6.0 + u * (5.0 + u * (2.0 + u)))
                return alpha(u) ** 2 * poly * math.exp(-2.0 * u)

            scale = -1.0 / (math.pi * d**7)
        case "full_log":

            def integrand(u: float) -> float:
                return float(_atom_bracket(u, alpha(u), d))

            scale = 1.0 / (2.0 * math.pi * d)
        case _:
            raise ConfigError(f"two_atoms_energy has no mode {mode!r}")

    head, _ = integrate.quad(integrand, 0.0, knee, epsabs=0.0, epsrel=1e-12, limit=200)
    tail, _ = integrate.quad(integrand, knee, math.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return scale * (head + tail)


def _two_atoms_general_logdet(atom: MaterialModel, d: float, kappa: float) -> LogDet:
    basis = ChannelBasis.spherical(kappa, 1)
    F = atom_block(atom, basis)
    pair = PairConfiguration(PairKind.OUTSIDE, 0.0, 0.0, d)
    X = Displacement.along_z(d)
    X_ab, X_ba = assemble_X(pair, sph_U_block(basis, X), sph_U_block(basis, -X))
    return logdet_two_body(F, X_ab, F, X_ba)


def two_atoms_pipeline(d: float, alpha0: float, d10: float, general: bool = False) -> Pipeline:
    """Per-frequency log det of two atoms.

    The default evaluates the closed 2x2 channel product; ``general``
    assembles l = 1 spherical amplitude and translation blocks instead.
    """
    TwoAtoms(d, alpha0, d10).validate()
    atom = two_level_atom(alpha0, d10)

    def factory(medium: Medium):
        def integrand(kappa: float, order: int) -> float | LogDet:
            kg = medium.index(kappa) * kappa
            if general:
                if not medium.is_vacuum:
                    raise ConfigError("the general atom pipeline is vacuum only")
                return _two_atoms_general_logdet(atom, d, kappa)
            alpha = atom.alpha0 / (1.0 + (kappa * atom.d10) ** 2)
            return float(_atom_bracket(kg * d, alpha, d))

        return integrand

    return Pipeline(name="two_atoms", d_char=d, factory=factory, per_unit="")


# ---------------------------------------------------------------------------
# Parallel plates
# ---------------------------------------------------------------------------


def lifshitz_energy(d: float, material_a: MaterialModel, material_b: MaterialModel, x_nodes: int = 64) -> float:
    """Lifshitz energy per unit area of two half-spaces a gap d apart.

    Written as (1 / 4 pi^2) int q^2 dq int_0^1 dx sum_P log(1 - r_a r_b e^{-2 q d})
    with kappa = x q, so dispersive responses are evaluated at every node.
    """
    ParallelPlates(d, material_a, material_b).validate()
    if material_a.is_vacuum or material_b.is_vacuum:
        return 0.0
    x, wx = _gauss_legendre(x_nodes, 0.0, 1.0)

    def inner(y: float) -> float:
        q = y / (2.0 * d)
        total = 0.0
        for xi, wi in zip(x, wx):
            kappa = xi * q
            ra = fresnel_from_response(permittivity(material_a, kappa), permeability(material_a, kappa), xi)
            rb = fresnel_from_response(permittivity(material_b, kappa), permeability(material_b, kappa), xi)
            damp = math.exp(-y)
            total += wi * (math.log1p(-ra[0] * rb[0] * damp) + math.log1p(-ra[1] * rb[1] * damp))
        return q * q * total / (2.0 * d)

    value, _ = integrate.quad(inner, 0.0, math.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    return value / (4.0 * math.pi**2)


def plate_pipeline(d: float, material_a: MaterialModel, material_b: MaterialModel) -> Pipeline:
    """Per-frequency log det of two plates, (1 / 2 pi) int_{kappa}^inf q dq sum_P log(...)."""
    ParallelPlates(d, material_a, material_b).validate()

    def factory(medium: Medium):
        def integrand(kappa: float, order: int) -> float:
            kg = medium.index(kappa) * kappa
            eps_a, mu_a = relative_responses(material_a, medium, kappa)
            eps_b, mu_b = relative_responses(material_b, medium, kappa)
            if (eps_a == 1.0 and mu_a == 1.0) or (eps_b == 1.0 and mu_b == 1.0):
                return 0.0

            def radial(y: float) -> float:
                q = kg + y / (2.0 * d)
                x = kg / q
                ra = fresnel_from_response(eps_a, mu_a, x)
                rb = fresnel_from_response(eps_b, mu_b, x)
                damp = math.exp(-2.0 * kg * d - y)
                return q * (math.log1p(-ra[0] * rb[0] * damp) + math.log1p(-ra[1] * rb[1] * damp))

            value, _ = integrate.quad(radial, 0.0, math.inf, epsabs=0.0, epsrel=1e-11, limit=200)
            return value / (2.0 * d) / (2.0 * math.pi)

        return integrand

    return Pipeline(name="parallel_plates", d_char=d, factory=factory, per_unit="area")


# composite panels in y = 2 d (q - kappa)
_PLANE_PANELS = ((0.0, 1.0), (1.0, 2.0), (2.0, 4.0), (4.0, 8.0), (8.0, 16.0), (16.0, 40.0))


def _plane_basis(kappa: float, d: float, nodes: int = 24) -> ChannelBasis:
    ys, ws = [], []
    for a, b in _PLANE_PANELS:
        y, w = _gauss_legendre(nodes, a, b)
        ys.append(y)
        ws.append(w)
    y, w = np.concatenate(ys), np.concatenate(ws)
    q = kappa + y / (2.0 * d)
    k = np.sqrt(y / (2.0 * d) * (2.0 * kappa + y / (2.0 * d)))
    weights = q * w / (2.0 * d) / (2.0 * math.pi)
    k_perp = np.column_stack([k, np.zeros_like(k)])
    return ChannelBasis.plane(kappa, k_perp, weights)


def plane_pipeline(d: float, material_a: MaterialModel, material_b: MaterialModel) -> Pipeline:
    """Two plates through plate amplitudes, plane V/W blocks and the continuum log det."""
    ParallelPlates(d, material_a, material_b, mode="plane_basis").validate()
    pair = PairConfiguration(PairKind.PLANE_STACK, distance=d)
    X = Displacement.along_z(d)

    def factory(medium: Medium):
        if not medium.is_vacuum:
            raise ConfigError("the plane-basis plate pipeline is vacuum only")

        def integrand(kappa: float, order: int) -> LogDet:
            basis = _plane_basis(kappa, d)
            F_a = plate_block(material_a, basis)
            F_b = plate_block(material_b, basis)
            X_ab, X_ba = assemble_X(pair, plane_V_block(basis, X), plane_W_block(basis, X))
            return logdet_two_body(F_a, X_ab, F_b, X_ba)

        return integrand

    return Pipeline(name="parallel_plates_plane_basis", d_char=d, factory=factory, per_unit="area")


def plane_pipeline_energy(
    d: float,
    material_a: MaterialModel,
    material_b: MaterialModel,
    quadrature: QuadratureSpec | None = None,
    threads: int | None = None,
) -> EnergyResult:
    return integrate_energy(plane_pipeline(d, material_a, material_b), quadrature, threads=threads)


# ---------------------------------------------------------------------------
# Two perfectly conducting cylinders
# ---------------------------------------------------------------------------


def _cylinder_pair_logdet(p: float, geometry: TwoCylindersOuter | CylinderInCylinder, nmax: int) -> float:
    """log det N^M + log det N^E at p = sqrt(kappa^2 + k_z^2).

    N = F_a C F_b C with C_{nn'} = K_{|n+n'|}(p d) outside or I_{|n+n'|}(p d)
    for an enclosed cylinder; the product F_a F_b is positive for every
    channel, so N is similar to B B^T with B = |F_a|^1/2 C |F_b|^1/2.
    """
    n = np.arange(-nmax, nmax + 1)
    order = np.abs(n[:, None] + n[None, :])
    d = geometry.d
    inner = isinstance(geometry, CylinderInCylinder)
    if inner:
        if d == 0.0:
            coupling = np.where(order == 0, 0.0, -np.inf)
        else:
            coupling = specfun.log_bessel_i(order, p * d)
    else:
        coupling = specfun.log_bessel_k(order, p * d)

    total = 0.0
    for pol in POLARIZATIONS:
        if inner:
            _, log_a = pec_cylinder_log(geometry.outer_radius, p, n, pol, interior=True)
            _, log_b = pec_cylinder_log(geometry.inner_radius, p, n, pol)
        else:
            _, log_a = pec_cylinder_log(geometry.radius_a, p, n, pol)
            _, log_b = pec_cylinder_log(geometry.radius_b, p, n, pol)
        B = np.exp(0.5 * log_a[:, None] + coupling + 0.5 * log_b[None, :])
        total += logdet(B @ B.T).value
    return total


def _cylinder_pair_general_logdet(p: float, geometry: TwoCylindersOuter | CylinderInCylinder, nmax: int) -> LogDet:
    """The same log det assembled from cylindrical U, V and W blocks."""
    basis = ChannelBasis.cylindrical(p, 0.0, nmax)
    X = Displacement(geometry.d, 0.0, 0.0)  # O_b - O_a
    if isinstance(geometry, CylinderInCylinder):
        pair = PairConfiguration(PairKind.A_ENCLOSES_B, geometry.outer_radius, geometry.inner_radius, geometry.d)
        F_a = pec_cylinder_block(geometry.outer_radius, basis, interior=True)
        F_b = pec_cylinder_block(geometry.inner_radius, basis)
        into_b = cyl_V_block(basis, -X)
        X_ab, X_ba = assemble_X(pair, w_from_v(into_b), into_b)
    else:
        pair = PairConfiguration(PairKind.OUTSIDE, geometry.radius_a, geometry.radius_b, geometry.d)
        F_a = pec_cylinder_block(geometry.radius_a, basis)
        F_b = pec_cylinder_block(geometry.radius_b, basis)
        X_ab, X_ba = assemble_X(pair, cyl_U_block(basis, X), cyl_U_block(basis, -X))
    return logdet_two_body(F_a, X_ab, F_b, X_ba)


def two_cylinders_pipeline(geometry: TwoCylindersOuter | CylinderInCylinder) -> Pipeline:
    """Two parallel PEC cylinders, per unit length.

    In vacuum the (kappa, k_z) plane is integrated in polar form,
    E / L = (1 / 4 pi) int p dp g(p).
    """
    geometry.validate()
    general = geometry.mode == "general"
    gap = geometry.gap
    if isinstance(geometry, CylinderInCylinder):
        policy = TruncationPolicy.for_gap(geometry.outer_radius, geometry.inner_radius + geometry.d, geometry.outer_radius)
    else:
        policy = TruncationPolicy.for_gap(max(geometry.radius_a, geometry.radius_b), geometry.radius_a + geometry.radius_b, geometry.d)

    def g(p: float, nmax: int) -> float:
        if general:
            return _cylinder_pair_general_logdet(p, geometry, nmax).value
        return _cylinder_pair_logdet(p, geometry, nmax)

    def polar(p: float, nmax: int) -> float:
        return 0.5 * p * g(p, nmax)

    def factory(medium: Medium):
        def integrand(kappa: float, nmax: int) -> float:
            kg = medium.index(kappa) * kappa
            return _half_line(lambda k_z: g(math.hypot(kg, k_z), nmax), gap) / math.pi

        return integrand

    return Pipeline(
        name=geometry.variant,
        d_char=gap,
        factory=factory,
        polar=polar,
        truncation=policy,
        per_unit="length",
    )


def two_cylinders_energy(
    radius_a: float,
    radius_b: float,
    d: float,
    configuration: str = "outer",
    quadrature: QuadratureSpec | None = None,
    truncation: TruncationPolicy | None = None,
    threads: int | None = None,
) -> EnergyResult:
    match configuration:
        case "outer":
            geometry = TwoCylindersOuter(radius_a, radius_b, d)
        case "inner":
            geometry = CylinderInCylinder(radius_a, radius_b, d)
        case _:
            raise ConfigError(f"unknown cylinder configuration {configuration!r}; use 'outer' or 'inner'")
    return integrate_energy(two_cylinders_pipeline(geometry), quadrature, truncation, threads=threads)


# ---------------------------------------------------------------------------
# Sphere opposite a plate
# ---------------------------------------------------------------------------


def _log_prefactor(l: np.ndarray, m: int) -> np.ndarray:
    return 0.5 * (
        np.log(4.0 * math.pi * (2 * l + 1) / (l * (l + 1)))
        + special.gammaln(l - m + 1)
        - special.gammaln(l + m + 1)
    )


def _sphere_plate_blocks(
    kappa: float,
    lmax: int,
    R: float,
    d: float,
    sphere: MaterialModel,
    plate: MaterialModel,
    medium: Medium,
) -> list[np.ndarray]:
    """Real N blocks for m = 0..lmax.

    With t = q / kappa, the plane-to-spherical conversion gives
    a_l = Pref u P_l^m'(t), b_l = Pref m P_l^m(t) / u (u = sqrt(t^2 - 1)),
    and after the k_perp angular integral

        N_MM = F_M c int (a a' r^M - b b' r^E)
        N_EE = F_E c int (a a' r^E - b b' r^M)
        N_ME = -F_M c int (a b' r^M - b a' r^E)
        N_EM =  F_E c int (b a' r^M - a b' r^E)

    up to a diagonal similarity that makes N real. Every row and column is
    scaled by |F|^1/2 t^l so the entries stay representable.
    """
    kg = medium.index(kappa) * kappa
    eps, mu = relative_responses(plate, medium, kappa)
    y, wy = _gauss_laguerre(lmax + 20)
    t = 1.0 + y / (2.0 * d * kg)
    r_m, r_e = fresnel_from_response(eps, mu, 1.0 / t)
    w = np.sqrt(1.0 - 1.0 / (t * t))
    log_c = -2.0 * d * kg - math.log(8.0 * math.pi * kg * d)

    ls = np.arange(1, lmax + 1)
    sign, log_f = {}, {}
    with np.errstate(divide="ignore"):
        for pol in POLARIZATIONS:
            sign[pol], log_f[pol] = mie_sphere_log(sphere, R, kappa, ls, pol, medium)

    blocks = []
    for m in range(lmax + 1):
        lo = max(1, m)
        sel = ls >= lo
        lm = ls[sel]
        table = specfun.legendre_ge1_scaled(lmax, m, t)[lm]
        if m + 1 <= lmax:
            table_next = specfun.legendre_ge1_scaled(lmax, m + 1, t)[lm]
        else:
            table_next = np.zeros_like(table)
        if m == 0:
            a = w * table_next
            b = np.zeros_like(table)
        else:
            a = w ** (m - 1) * (m * table + w * w * table_next)
            b = m * w ** (m - 1) * table / t

        base = _log_prefactor(lm, m)[:, None] + lm[:, None] * np.log(t)[None, :] + 0.5 * log_c
        with np.errstate(over="ignore", invalid="ignore"):
            scale_m = np.exp(base + 0.5 * log_f[M][sel][:, None])
            scale_e = np.exp(base + 0.5 * log_f[E][sel][:, None])
        a_m, b_m = a * scale_m, b * scale_m
        a_e, b_e = a * scale_e, b * scale_e

        def pair(left, right, r):
            return (left * (wy * r)) @ right.T

        mm = pair(a_m, a_m, r_m) - pair(b_m, b_m, r_e)
        ee = pair(a_e, a_e, r_e) - pair(b_e, b_e, r_m)
        me = -(pair(a_m, b_e, r_m) - pair(b_m, a_e, r_e))
        em = pair(b_e, a_m, r_m) - pair(a_e, b_m, r_e)
        s_m = sign[M][sel][:, None]
        s_e = sign[E][sel][:, None]
        block = np.block([[s_m * mm, s_m * me], [s_e * em, s_e * ee]])
        blocks.append(np.nan_to_num(block, nan=0.0))
    return blocks


def _sphere_plate_logdet(kappa, lmax, R, d, sphere, plate, medium, blocked: bool = True) -> LogDet:
    blocks = _sphere_plate_blocks(kappa, lmax, R, d, sphere, plate, medium)
    if blocked:
        parts = [logdet(block) for block in blocks]
        value = parts[0].value + 2.0 * math.fsum(p.value for p in parts[1:])
        imag = max(abs(p.imag) for p in parts)
        return LogDet(value, imag)
    # negative m flips the sign of b, i.e. of the polarization-mixing blocks
    full = []
    for m in range(-lmax, lmax + 1):
        block = blocks[abs(m)]
        if m < 0:
            half = block.shape[0] // 2
            flip = np.concatenate([np.ones(half), -np.ones(half)])
            block = flip[:, None] * block * flip[None, :]
        full.append(block)
    return logdet(linalg.block_diag(*full))


def sphere_plate_pipeline(geometry: SpherePlate, blocked: bool = True) -> Pipeline:
    """Sphere of radius R at center-to-surface distance d from a plate."""
    geometry.validate()
    R, d = geometry.radius, geometry.d
    sphere, plate = geometry.material_sphere, geometry.material_plate

    def factory(medium: Medium):
        if sphere.is_vacuum or plate.is_vacuum:
            return lambda kappa, lmax: 0.0

        def integrand(kappa: float, lmax: int) -> LogDet:
            return _sphere_plate_logdet(kappa, lmax, R, d, sphere, plate, medium, blocked)

        return integrand

    return Pipeline(
        name="sphere_plate",
        d_char=geometry.gap,
        factory=factory,
        truncation=TruncationPolicy.for_gap(R, R, d),
        per_unit="",
    )


def static_polarizabilities(sphere: MaterialModel, R: float) -> tuple[float, float]:
    """(alpha^M, alpha^E) of a sphere from its zero-frequency response."""
    if sphere.is_pec:
        return -0.5 * R**3, R**3
    eps, mu = _static_responses(sphere)
    if math.isinf(eps):
        return -0.5 * R**3, R**3
    return (mu - 1.0) / (mu + 2.0) * R**3, (eps - 1.0) / (eps + 2.0) * R**3


def phi_integrals(material_plate: MaterialModel, target: str) -> float:
    """Zero-frequency plate integrals of the large-distance energies.

    ``sphere_E`` and ``sphere_M`` enter the sphere-plate energy and tend to
    +1 and -1 for a perfectly reflecting plate; ``cylinder_E`` enters the
    PEC cylinder-plate energy and tends to 1.
    """
    eps, mu = _static_responses(material_plate)

    def r(x: float) -> tuple[float, float]:
        r_m, r_e = fresnel_from_response(eps, mu, x)
        return float(r_m), float(r_e)

    match target:
        case "sphere_E":

            def integrand(x):
                r_m, r_e = r(x)
                return (1.0 - 0.5 * x * x) * r_e - 0.5 * x * x * r_m

        case "sphere_M":

            def integrand(x):
                r_m, r_e = r(x)
                return (1.0 - 0.5 * x * x) * r_m - 0.5 * x * x * r_e

        case "cylinder_E":

            def integrand(x):
                r_m, r_e = r(x)
                return (r_e - x * r_m) / (1.0 + x)

        case _:
            raise ConfigError(f"unknown phi integral {target!r}; use sphere_E, sphere_M or cylinder_E")
    value, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
    return value


def sphere_plate_energy(
    R: float,
    d: float,
    material_sphere: MaterialModel,
    material_plate: MaterialModel,
    mode: str = "full",
    quadrature: QuadratureSpec | None = None,
    truncation: TruncationPolicy | None = None,
    threads: int | None = None,
) -> EnergyResult | float:
    """Sphere-plate energy; ``asymptotic`` is -(3 / 8 pi d^4)(alpha^M phi^M + alpha^E phi^E)."""
    geometry = SpherePlate(R, d, material_sphere, material_plate, mode)
    geometry.validate()
    if mode == "asymptotic":
        alpha_m, alpha_e = static_polarizabilities(material_sphere, R)
        phi_m = phi_integrals(material_plate, "sphere_M")
        phi_e = phi_integrals(material_plate, "sphere_E")
        return -3.0 / (8.0 * math.pi * d**4) * (alpha_m * phi_m + alpha_e * phi_e)
    return integrate_energy(sphere_plate_pipeline(geometry), quadrature, truncation, threads=threads)


# ---------------------------------------------------------------------------
# Cylinder opposite a plate
# ---------------------------------------------------------------------------

_CYL_CHANNELS = tuple((n, pol) for n in (-1, 0, 1) for pol in POLARIZATIONS)


def _s_nodes(p: float, k_z: float, d: float, per_panel: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on s in (-S, S) for k_y = p sinh s, graded near s = 0 on the scale |k_z| / p."""
    S = math.acosh(1.0 + 20.0 / (d * p))
    edges = {0.0, S}
    if k_z != 0.0:
        for j in range(-2, 4):
            edge = math.asinh(abs(k_z) / p * 4.0**j)
            if edge < S:
                edges.add(edge)
    edges = sorted(edges)
    s, w = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, wx = _gauss_legendre(per_panel, a, b)
        s.extend((x, -x))
        w.extend((wx, wx))
    return np.concatenate(s), np.concatenate(w)


def _cylinder_plate_coupling(kg: float, k_z: float, d: float, eps: float, mu: float, channels) -> np.ndarray:
    """G_{nP'', n'P'} = 1/2 int ds e^{-2 d p cosh s} sum_Q D r^Q D^+ (1 - 2 delta_{Q,P'})."""
    p = math.hypot(kg, k_z)
    s, w = _s_nodes(p, k_z, d)
    cosh, sinh = np.cosh(s), np.sinh(s)
    K = np.sqrt((p * sinh) ** 2 + k_z**2)
    r_m, r_e = fresnel_from_response(eps, mu, kg / (p * cosh))
    weight = 0.5 * w * np.exp(-2.0 * d * p * cosh)

    # D = i * real factor; rows are channels, one array per plane polarization
    same = -(k_z / K) * cosh
    mixed = (kg / K) * sinh
    rows = {M: [], E: []}
    for n, pol in channels:
        growth = np.exp(n * s)
        rows[M].append(growth * (same if pol is M else mixed))
        rows[E].append(growth * (same if pol is E else -mixed))
    D_m, D_e = np.array(rows[M]), np.array(rows[E])
    sign_m = np.array([-1.0 if pol is M else 1.0 for _, pol in channels])
    sign_e = -sign_m
    G = (D_m * (weight * r_m)) @ D_m.T * sign_m[None, :] + (D_e * (weight * r_e)) @ D_e.T * sign_e[None, :]
    return G


def _cylinder_plate_logdet(kappa, k_z, geometry: CylinderPlate, medium: Medium) -> float:
    R, d = geometry.radius, geometry.d
    kg = medium.index(kappa) * kappa
    eps, mu = relative_responses(geometry.material_plate, medium, kappa)
    if geometry.mode == "full_pec_logmode":
        channels = ((0, E),)
        f = np.array([[pec_cylinder_logmode(R, d)]])
    else:
        channels = _CYL_CHANNELS
        f = np.zeros((6, 6))
        for i, (n, P) in enumerate(channels):
            for j, (n2, P2) in enumerate(channels):
                if n == n2:
                    f[i, j] = dielectric_cylinder_smallR(geometry.material_cylinder, R, kappa, k_z, n, P, P2, medium)
    G = _cylinder_plate_coupling(kg, k_z, d, eps, mu, channels)
    return logdet(f @ G).value


def cylinder_plate_pipeline(geometry: CylinderPlate, angle_nodes: int = 24) -> Pipeline:
    """Full cylinder-plate pipeline per unit length (small-radius amplitudes)."""
    geometry.validate()
    if geometry.mode == "full_smallR" and geometry.material_cylinder.is_pec:
        raise ConfigError("full_smallR needs a finite-permittivity cylinder; use full_pec_logmode")
    if geometry.mode == "full_pec_logmode" and not geometry.material_cylinder.is_pec:
        raise ConfigError("full_pec_logmode describes a perfectly conducting cylinder")
    if geometry.mode not in ("full_smallR", "full_pec_logmode"):
        raise ConfigError(f"{geometry.mode} is a closed-form mode without a pipeline")
    gap = geometry.gap
    psi, w_psi = _gauss_legendre(angle_nodes, 0.0, 0.5 * math.pi)
    vacuum = Medium()

    def polar(rho: float, order: int) -> float:
        values = [
            _cylinder_plate_logdet(rho * math.cos(a), rho * math.sin(a), geometry, vacuum) for a in psi
        ]
        return rho / math.pi * math.fsum(wi * v for wi, v in zip(w_psi, values))

    def factory(medium: Medium):
        if geometry.material_plate.is_vacuum:
            return lambda kappa, order: 0.0

        def integrand(kappa: float, order: int) -> float:
            return _half_line(lambda k_z: _cylinder_plate_logdet(kappa, k_z, geometry, medium), gap) / math.pi

        return integrand

    return Pipeline(
        name="cylinder_plate",
        d_char=gap,
        factory=factory,
        polar=None if geometry.material_plate.is_vacuum else polar,
        per_unit="length",
    )


def cylinder_plate_energy(
    R: float,
    d: float,
    material_cylinder: MaterialModel,
    material_plate: MaterialModel,
    mode: str = "full_smallR",
    quadrature: QuadratureSpec | None = None,
    threads: int | None = None,
) -> EnergyResult | float:
    """Energy per unit length of a cylinder of radius R at center-to-surface distance d."""
    geometry = CylinderPlate(R, d, material_cylinder, material_plate, mode)
    geometry.validate()
    match mode:
        case "asymptotic_dielectric" | "asymptotic_pec_plate":
            if material_cylinder.is_pec:
                raise ConfigError(f"{mode} needs a finite-permittivity cylinder")
            eps, mu = _static_responses(material_cylinder)
            if mode == "asymptotic_pec_plate":
                if not material_plate.is_pec:
                    logger.info("asymptotic_pec_plate treats the plate as perfectly reflecting")
                return -(R * R) / (32.0 * math.pi * d**4) * (eps - mu) * (9.0 + eps + mu + eps * mu) / (
                    (1.0 + eps) * (1.0 + mu)
                )
            if abs(mu - 1.0) > 1e-12:
                logger.warning("asymptotic_dielectric assumes mu = 1 for the cylinder, got %g", mu)
            eps_a, mu_a = _static_responses(material_plate)

            def integrand(x: float) -> float:
                r_m, r_e = fresnel_from_response(eps_a, mu_a, x)
                return float((7.0 + eps - 4.0 * x * x) * r_e - (3.0 + eps) * x * x * r_m)

            value, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
            return -3.0 * R * R / (128.0 * math.pi * d**4) * (eps - 1.0) / (eps + 1.0) * value
        case "asymptotic_pec_cylinder":
            if not material_cylinder.is_pec:
                logger.info("asymptotic_pec_cylinder treats the cylinder as perfectly conducting")
            return phi_integrals(material_plate, "cylinder_E") / (16.0 * math.pi * d * d * math.log(R / d))
    return integrate_energy(cylinder_plate_pipeline(geometry), quadrature, threads=threads)


# ---------------------------------------------------------------------------
# Dispatch on geometry descriptions
# ---------------------------------------------------------------------------

CLOSED_FORM_MODES = {
    "two_atoms": ("full_log", "quadratic"),
    "parallel_plates": ("lifshitz",),
    "sphere_plate": ("asymptotic",),
    "cylinder_plate": ("asymptotic_dielectric", "asymptotic_pec_plate", "asymptotic_pec_cylinder"),
}


def build_pipeline(geometry: GeometryConfig) -> Pipeline:
    """The per-frequency pipeline of any geometry description."""
    geometry.validate()
    match geometry:
        case TwoAtoms():
            return two_atoms_pipeline(geometry.d, geometry.alpha0, geometry.d10, general=geometry.mode == "general")
        case ParallelPlates(mode="plane_basis"):
            return plane_pipeline(geometry.d, geometry.material_a, geometry.material_b)
        case ParallelPlates():
            return plate_pipeline(geometry.d, geometry.material_a, geometry.material_b)
        case TwoCylindersOuter() | CylinderInCylinder():
            return two_cylinders_pipeline(geometry)
        case SpherePlate():
            return sphere_plate_pipeline(geometry)
        case CylinderPlate():
            if geometry.mode.startswith("asymptotic"):
                mode = "full_pec_logmode" if geometry.material_cylinder.is_pec else "full_smallR"
                geometry = CylinderPlate(geometry.radius, geometry.d, geometry.material_cylinder, geometry.material_plate, mode)
            return cylinder_plate_pipeline(geometry)
    raise ConfigError(f"unsupported geometry {geometry!r}")


def _closed_form(geometry: GeometryConfig) -> float:
    match geometry:
        case TwoAtoms():
            return two_atoms_energy(geometry.d, geometry.alpha0, geometry.d10, geometry.mode)
        case ParallelPlates():
            return lifshitz_energy(geometry.d, geometry.material_a, geometry.material_b)
        case SpherePlate():
            return sphere_plate_energy(geometry.radius, geometry.d, geometry.material_sphere, geometry.material_plate, geometry.mode)
        case CylinderPlate():
            return cylinder_plate_energy(
                geometry.radius, geometry.d, geometry.material_cylinder, geometry.material_plate, geometry.mode
            )
    raise ConfigError(f"{geometry.variant} has no closed form")


def evaluate(
    geometry: GeometryConfig,
    *,
    beta: float | None = None,
    medium: Medium | None = None,
    quadrature: QuadratureSpec | None = None,
    truncation: TruncationPolicy | None = None,
    strict: bool = False,
    threads: int | None = None,
) -> EnergyResult:
    """Energy (or free energy when ``beta`` is given) of a geometry description.

    Closed-form modes are used as they are at zero temperature in vacuum;
    otherwise the geometry's pipeline is evaluated.
    """
    geometry.validate()
    medium = medium or Medium()
    closed = geometry.mode in CLOSED_FORM_MODES.get(geometry.variant, ())
    if closed and beta is None and medium.is_vacuum:
        value = _closed_form(geometry)
        per_unit = {"parallel_plates": "area", "cylinder_plate": "length"}.get(geometry.variant, "")
        return EnergyResult(value=value, per_unit=per_unit, diagnostics={"pipeline": geometry.variant, "mode": geometry.mode})
    if closed:
        logger.info("%s mode %s has no temperature or medium form; using the full pipeline", geometry.variant, geometry.mode)
    pipeline = apply_medium(build_pipeline(geometry), medium)
    if beta is not None:
        return matsubara_free_energy(pipeline, beta, truncation, strict=strict, threads=threads)
    return integrate_energy(pipeline, quadrature, truncation, strict=strict, threads=threads)
