"""Self-check suites: closed-form limits, identities and pipeline consistency.

Each suite returns a list of :class:`CheckOutcome`; ``run_check`` collects
them into a :class:`CheckReport`.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .compute.energy import integrate_energy, matsubara_free_energy, sample_integrand
from .compute.geometries import (
    build_pipeline,
    cylinder_plate_energy,
    evaluate,
    lifshitz_energy,
    phi_integrals,
    plane_pipeline,
    plane_pipeline_energy,
    plate_pipeline,
    sphere_plate_energy,
    sphere_plate_pipeline,
    two_atoms_energy,
    two_atoms_pipeline,
    two_cylinders_pipeline,
)
from .errors import ConfigError
from .models.geometry import (
    CylinderInCylinder,
    CylinderPlate,
    ParallelPlates,
    SpherePlate,
    TwoAtoms,
    TwoCylindersOuter,
    with_parameter,
)
from .models.results import QuadratureSpec, TruncationPolicy
from .physics import specfun, waves
from .physics.materials import constant, perfect_conductor
from .physics.scattering import ChannelBasis
from .physics.translation import Displacement, cyl_U_block, cyl_V_block, plane_V_block, sph_U_block, sph_V_block
from .search.fuzzy import did_you_mean

logger = logging.getLogger(__name__)

SEED = 20240611

# Cylinder pairs and polar momenta p = sqrt(kappa^2 + k_z^2) on which the
# general block pipeline must reproduce the specialized determinant.
CYLINDER_PAIRS = (
    TwoCylindersOuter(1.0, 0.5, 2.5),
    CylinderInCylinder(3.0, 1.0, 0.5),
    CylinderInCylinder(2.0, 0.7, 0.5),
    CylinderInCylinder(1.0, 3.0, 0.0),
)
CYLINDER_MOMENTA = (0.05, 0.7, 3.0, 60.0, 400.0, 1500.0, 3000.0)


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CheckReport:
    suite: str
    outcomes: list[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def _within(name: str, err: float, tol: float) -> CheckOutcome:
    return CheckOutcome(name, bool(err < tol), f"error {err:.2e} (tol {tol:g})")


def _matrix_rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def _random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def check_specfun() -> list[CheckOutcome]:
    out = []
    worst = 0.0
    for n in (0, 1, 2, 10, 30):
        for x in (0.01, 0.1, 1.0, 10.0, 100.0):
            i, di = specfun.bessel_i_scaled(n, x)
            k, dk = specfun.bessel_k_scaled(n, x)
            worst = max(worst, abs((i * dk - di * k) * x + 1.0))
    out.append(_within("cylindrical Wronskian I K' - I' K = -1/x", worst, 1e-10))

    worst = 0.0
    for l in (0, 1, 2, 10, 30):
        for z in (0.01, 0.1, 1.0, 10.0, 100.0):
            i, di = specfun.sph_bessel_i_scaled(l, z)
            k, dk = specfun.sph_bessel_k_scaled(l, z)
            worst = max(worst, abs((i * dk - di * k) * z * z + 1.0))
    out.append(_within("spherical Wronskian i k' - i' k = -1/z^2", worst, 1e-10))

    worst = 0.0
    for nu in (0.5, 5.0, 40.0, 100.0):
        for x in (1e-3, 1.0, 50.0):
            log_product = specfun.log_bessel_i(nu, x) + specfun.log_bessel_k(nu, x)
            ratio = specfun.bessel_i_logderiv(nu, x) - specfun.bessel_k_logderiv(nu, x)
            worst = max(worst, abs(x * math.exp(log_product) * ratio - 1.0))
    out.append(_within("log-form Wronskian at extreme orders", worst, 1e-9))

    worst = 0.0
    for n in (1, 5, 20):
        for x in (0.5, 5.0, 50.0):
            prev, _ = specfun.bessel_i_scaled(n - 1, x)
            cur, _ = specfun.bessel_i_scaled(n, x)
            nxt, _ = specfun.bessel_i_scaled(n + 1, x)
            worst = max(worst, abs(prev - nxt - 2.0 * n / x * cur) / abs(prev))
    out.append(_within("recurrence I_{n-1} - I_{n+1} = (2n/x) I_n", worst, 1e-12))

    theta, phi = 0.7, -1.1
    worst = 0.0
    for l, m in ((1, 0), (3, 2), (6, -4), (10, 7)):
        mine = specfun.spherical_harmonic(l, m, theta, phi)
        worst = max(worst, abs(mine - special.sph_harm_y(l, m, theta, phi)))
    out.append(_within("spherical harmonics with Condon-Shortley phase", worst, 1e-12))
    return out


def check_wigner() -> list[CheckOutcome]:
    w3j = specfun.wigner3j
    rules = [
        w3j(2, 2, 2, 1, 1, 1) == 0.0,  # m sum
        w3j(1, 1, 3, 0, 0, 0) == 0.0,  # triangle
        w3j(1, 2, 2, 2, 0, -2) == 0.0,  # |m| > l
        w3j(1, 1, 1, 0, 0, 0) == 0.0,  # odd l sum with m = 0
    ]
    out = [CheckOutcome("selection rules", all(rules), f"{sum(rules)}/{len(rules)} exact zeros")]

    known = [
        (w3j(1, 1, 0, 0, 0, 0), -1.0 / math.sqrt(3.0)),
        (w3j(1, 1, 2, 0, 0, 0), math.sqrt(2.0 / 15.0)),
        (w3j(2, 2, 2, 0, 0, 0), -math.sqrt(2.0 / 35.0)),
        (w3j(1, 1, 1, 1, -1, 0), 1.0 / math.sqrt(6.0)),
    ]
    out.append(_within("tabulated values", max(abs(a - b) for a, b in known), 1e-14))

    worst = 0.0
    for l1 in range(0, 11):
        for l2 in range(0, 11):
            ls = range(abs(l1 - l2), l1 + l2 + 1)
            for l3 in ls:
                for l3p in ls:
                    for m3 in {0, min(l3, l3p)}:
                        total = 0.0
                        for m1 in range(-l1, l1 + 1):
                            m2 = -m1 - m3
                            if abs(m2) > l2:
                                continue
                            total += w3j(l1, l2, l3, m1, m2, m3) * w3j(l1, l2, l3p, m1, m2, m3)
                        expected = 1.0 / (2 * l3 + 1) if l3 == l3p else 0.0
                        worst = max(worst, abs(total - expected))
    out.append(_within("orthogonality over m1, m2 for l <= 10", worst, 1e-12))

    worst = 0.0
    for l1, l2, l3, m1, m2, m3 in ((3, 4, 5, 1, -3, 2), (6, 6, 8, 2, 0, -2), (10, 7, 5, -4, 4, 0)):
        value = w3j(l1, l2, l3, m1, m2, m3)
        worst = max(worst, abs(value - w3j(l2, l3, l1, m2, m3, m1)))
        sign = (-1) ** (l1 + l2 + l3)
        worst = max(worst, abs(value - sign * w3j(l2, l1, l3, m2, m1, m3)))
        worst = max(worst, abs(value - sign * w3j(l1, l2, l3, -m1, -m2, -m3)))
    out.append(_within("permutation and reflection symmetry", worst, 1e-14))
    return out


# ---------------------------------------------------------------------------
# Translation and Green's function
# ---------------------------------------------------------------------------


def check_translation() -> list[CheckOutcome]:
    out = []
    kappa = 1.0
    X = Displacement(0.3, -0.4, 2.5)

    basis = ChannelBasis.spherical(kappa, 6)
    U = sph_U_block(basis, X).dense()
    U_back = sph_U_block(basis, -X).dense()
    c = basis.norms
    weighted = np.conj(U_back).T * (c[:, None] / c[None, :])
    out.append(_within("spherical U = C-weighted adjoint of U(-X), l <= 6", _matrix_rel(U, weighted), 1e-10))
    same = np.array([[ci[-1] is cj[-1] for cj in basis.channels] for ci in basis.channels])
    diag_err = float(np.linalg.norm((U - np.conj(U_back).T)[same]) / np.linalg.norm(U[same]))
    out.append(_within("spherical U plain adjoint on same-polarization blocks", diag_err, 1e-10))

    cyl = ChannelBasis.cylindrical(kappa, 0.7, 10)
    Xc = Displacement(1.8, -0.9, 0.4)
    Uc = cyl_U_block(cyl, Xc).dense()
    Uc_back = cyl_U_block(cyl, -Xc).dense()
    out.append(_within("cylindrical U = adjoint of U(-X), |n| <= 10", _matrix_rel(Uc, np.conj(Uc_back).T), 1e-10))

    plane = ChannelBasis.plane(kappa, np.array([[0.5, 0.2], [1.0, -1.0]]))
    blocks = (
        sph_V_block(basis, Displacement(0.0, 0.0, 0.0)),
        sph_V_block(basis, Displacement(1e-15, -2e-15, 1e-15)),
        cyl_V_block(cyl, Displacement(0.0, 0.0, 0.0)),
        plane_V_block(plane, Displacement(0.0, 0.0, 1e-15)),
    )
    worst = max(float(np.max(np.abs(b.dense() - np.eye(len(b.basis))))) for b in blocks)
    out.append(_within("V(X -> 0) is the identity", worst, 1e-12))
    return out


def _greens_pairs(rng: np.random.Generator, count: int, outer: tuple[float, float], inner: tuple[float, float]):
    for _ in range(count):
        x = rng.uniform(*outer) * _random_direction(rng)
        x_prime = rng.uniform(*inner) * _random_direction(rng)
        yield x, x_prime


def check_greens_function(pairs: int = 10) -> list[CheckOutcome]:
    rng = np.random.default_rng(SEED)
    kappa = 1.0
    out = []

    worst = max(
        _matrix_rel(waves.greens_spherical_series(kappa, x, xp, 25), waves.free_greens(kappa, x, xp))
        for x, xp in _greens_pairs(rng, pairs, (1.0, 2.0), (0.1, 0.3))
    )
    out.append(_within(f"spherical series, lmax = 25, {pairs} pairs", worst, 1e-6))

    worst = 0.0
    for _ in range(pairs):
        t, tp = rng.uniform(0.0, 2.0 * math.pi, size=2)
        rho, rho_p = rng.uniform(1.0, 2.0), rng.uniform(0.1, 0.3)
        z, zp = rng.uniform(-0.3, 0.3, size=2)
        x = np.array([rho * math.cos(t), rho * math.sin(t), z])
        xp = np.array([rho_p * math.cos(tp), rho_p * math.sin(tp), zp])
        worst = max(worst, _matrix_rel(waves.greens_cylindrical_series(kappa, x, xp, 25), waves.free_greens(kappa, x, xp)))
    out.append(_within(f"cylindrical series, nmax = 25, {pairs} pairs", worst, 1e-6))

    worst = 0.0
    for _ in range(max(2, pairs // 3)):
        xy, xyp = rng.uniform(-0.3, 0.3, size=2), rng.uniform(-0.3, 0.3, size=2)
        dz = rng.uniform(0.5, 1.0)
        x = np.array([xy[0], xy[1], 0.5 * dz])
        xp = np.array([xyp[0], xyp[1], -0.5 * dz])
        worst = max(worst, _matrix_rel(waves.greens_plane_series(kappa, x, xp), waves.free_greens(kappa, x, xp)))
    out.append(_within("plane-wave series with 2-D quadrature", worst, 1e-4))

    origin_src = np.zeros(3)
    origin_tgt = np.array([0.4, -0.3, 1.9])
    worst = 0.0
    for _ in range(pairs):
        x = origin_tgt + rng.uniform(0.05, 0.15) * _random_direction(rng)
        xp = origin_src + rng.uniform(0.05, 0.15) * _random_direction(rng)
        series = waves.greens_translated_series(kappa, x, xp, origin_src, origin_tgt, 8)
        worst = max(worst, _matrix_rel(series, waves.free_greens(kappa, x, xp)))
    out.append(_within("two-center series through the U block, lmax = 8", worst, 1e-6))

    worst = 0.0
    for _ in range(pairs):
        point = rng.uniform(0.1, 0.5) * _random_direction(rng)
        k_perp = rng.uniform(-1.5, 1.5, size=2)
        for pol in ("M", "E"):
            rebuilt = waves.plane_wave_from_spherical(kappa, k_perp, pol, point, 14)
            exact = waves.plane_wave(kappa, k_perp, pol, point)
            worst = max(worst, float(np.linalg.norm(rebuilt - exact) / np.linalg.norm(exact)))
    out.append(_within("plane wave rebuilt from spherical waves", worst, 1e-9))

    worst = 0.0
    for _ in range(pairs):
        point = rng.uniform(0.1, 0.5) * _random_direction(rng)
        k_y, k_z = rng.uniform(-1.5, 1.5, size=2)
        for pol in ("M", "E"):
            rebuilt = waves.plane_wave_from_cylindrical(kappa, k_y, k_z, pol, point, 20)
            exact = waves.plane_wave_along_x(kappa, k_y, k_z, pol, point)
            worst = max(worst, float(np.linalg.norm(rebuilt - exact) / np.linalg.norm(exact)))
    out.append(_within("plane wave rebuilt from cylindrical waves", worst, 1e-9))
    return out


# ---------------------------------------------------------------------------
# Energies
# ---------------------------------------------------------------------------


def check_lifshitz() -> list[CheckOutcome]:
    pec = perfect_conductor()
    out = []
    for d in (1.0, 2.5):
        exact = -math.pi**2 / (720.0 * d**3)
        out.append(_within(f"PEC plates at d = {d:g}: -pi^2/720 d^3", _rel(lifshitz_energy(d, pec, pec), exact), 1e-6))

    a, b = constant(4.0), constant(2.0)
    closed = lifshitz_energy(1.0, a, b)
    via_kappa = integrate_energy(plate_pipeline(1.0, a, b), QuadratureSpec(rtol=1e-9)).value
    out.append(_within("kappa-integrated plate pipeline vs closed form", _rel(via_kappa, closed), 1e-6))
    weaker = 0 > closed > lifshitz_energy(1.0, pec, pec)
    out.append(CheckOutcome("dielectric plates attract more weakly than PEC", weaker, f"E = {closed:.6g}"))
    return out


def check_pipeline() -> list[CheckOutcome]:
    a, b = constant(4.0), constant(2.0)
    out = []
    for d in (0.5, 1.0, 2.0):
        general = plane_pipeline_energy(d, a, b, QuadratureSpec(rtol=1e-11, max_levels=7)).value
        out.append(_within(f"plane-basis pipeline vs Lifshitz at d = {d:g}", _rel(general, lifshitz_energy(d, a, b)), 1e-8))

    kappas = [0.05, 0.5, 2.0]
    plane = [v.value for v in sample_integrand(plane_pipeline(1.0, a, b), kappas)]
    plate = [v.value for v in sample_integrand(plate_pipeline(1.0, a, b), kappas)]
    out.append(_within("plane-basis vs plate integrand per kappa", max(_rel(p, q) for p, q in zip(plane, plate)), 1e-9))

    for geometry in CYLINDER_PAIRS:
        special = two_cylinders_pipeline(geometry).polar
        general = two_cylinders_pipeline(dataclasses.replace(geometry, mode="general")).polar
        # deep in the exponential tail both forms round to zero
        err = max(abs(general(p, 6) - special(p, 6)) / max(abs(special(p, 6)), 1e-12) for p in CYLINDER_MOMENTA)
        out.append(_within(f"{geometry.variant}: general blocks vs specialized form", err, 1e-8))

    sphere = SpherePlate(1.0, 2.0)
    blocked = sphere_plate_pipeline(sphere).integrand()(0.4, 6).value
    full = sphere_plate_pipeline(sphere, blocked=False).integrand()(0.4, 6).value
    out.append(_within("sphere-plate m-blocked vs full determinant", _rel(full, blocked), 1e-10))
    return out


def check_atoms() -> list[CheckOutcome]:
    alpha0 = 1e-6
    out = []

    d, d10 = 1.0, 1e-3
    e = two_atoms_energy(d, alpha0, d10, "quadratic")
    target = -23.0 / (4.0 * math.pi)
    out.append(_within("Casimir-Polder limit E d^7 / alpha0^2 -> -23/4pi", _rel(e * d**7 / alpha0**2, target), 0.01))

    d, d10 = 1.0, 1e3
    e = two_atoms_energy(d, alpha0, d10, "quadratic")
    out.append(_within("London limit E d^6 / (omega10 alpha0^2) -> -3/4", _rel(e * d**6 * d10 / alpha0**2, -0.75), 0.01))

    full = two_atoms_energy(1.0, 1e-3, 0.5, "full_log")
    quad = two_atoms_energy(1.0, 1e-3, 0.5, "quadratic")
    out.append(_within("full log vs quadratic for weak polarizability", _rel(full, quad), 1e-3))

    general = integrate_energy(two_atoms_pipeline(1.0, 0.05, 0.5, general=True), QuadratureSpec(rtol=1e-8)).value
    out.append(_within("general l = 1 blocks vs closed product", _rel(general, two_atoms_energy(1.0, 0.05, 0.5)), 1e-6))
    return out


def check_sphere_plate() -> list[CheckOutcome]:
    pec = perfect_conductor()
    sphere = constant(1.1)
    out = []
    R, d = 1.0, 100.0
    full = sphere_plate_energy(R, d, sphere, pec, "full", QuadratureSpec(rtol=1e-5)).value
    asym = sphere_plate_energy(R, d, sphere, pec, "asymptotic")
    out.append(_within("full vs asymptotic at d/R = 100, eps = 1.1", _rel(full, asym), 0.02))

    metal = constant(1e12)
    out.append(_within("phi^E -> 1 for a metallic plate", abs(phi_integrals(metal, "sphere_E") - 1.0), 1e-4))
    out.append(_within("|phi^M| -> 1 for a metallic plate", abs(phi_integrals(metal, "sphere_M") + 1.0), 1e-4))
    return out


def check_cylinder_plate() -> list[CheckOutcome]:
    pec = perfect_conductor()
    out = []
    R, d = 1.0, 200.0
    cylinder = constant(1.05)
    full = cylinder_plate_energy(R, d, cylinder, pec, "full_smallR", QuadratureSpec(rtol=1e-4)).value
    asym = cylinder_plate_energy(R, d, cylinder, pec, "asymptotic_dielectric")
    out.append(_within("full_smallR vs asymptotic at d/R = 200, eps = 1.05", _rel(full, asym), 0.03))

    matched = cylinder_plate_energy(R, 10.0, constant(2.0, 2.0), pec, "asymptotic_pec_plate")
    out.append(CheckOutcome("PEC-plate asymptote vanishes for eps = mu", matched == 0.0, f"E = {matched:g}"))

    phi = phi_integrals(constant(1e12), "cylinder_E")
    out.append(_within("cylinder phi^E -> 1 for a metallic plate", abs(phi - 1.0), 1e-4))
    repulsive = [phi_integrals(constant(1.0, mu), "cylinder_E") for mu in (30.0, 100.0)]
    out.append(
        CheckOutcome("phi^E < 0 for a magnetic plate (mu >= 30)", all(v < 0 for v in repulsive), f"phi = {repulsive}")
    )
    return out


def check_matsubara() -> list[CheckOutcome]:
    pec = perfect_conductor()
    pipeline = plate_pipeline(1.0, pec, pec)
    out = []
    cold = matsubara_free_energy(pipeline, 1e3).value
    out.append(_within("PEC plates at hbar c beta / d = 1e3 vs T = 0", _rel(cold, -math.pi**2 / 720.0), 0.005))

    classical = -special.zeta(3.0) / (8.0 * math.pi)
    hot = [matsubara_free_energy(pipeline, beta) for beta in (0.1, 0.05)]
    out.append(_within("high-T limit beta F -> -zeta(3) / 8 pi d^2", _rel(0.05 * hot[1].value, classical), 1e-4))
    out.append(_within("high-T free energy linear in T", _rel(hot[1].value / hot[0].value, 2.0), 1e-4))
    return out


_PROPERTY_GEOMETRIES = (
    (TwoAtoms(2.0, 1e-3, 0.5), "d", np.linspace(1.0, 4.0, 10)),
    (ParallelPlates(1.0, constant(4.0), constant(2.0)), "d", np.linspace(0.5, 3.0, 10)),
    (TwoCylindersOuter(1.0, 1.0, 3.0), "d", np.linspace(2.4, 5.0, 10)),
    (CylinderInCylinder(3.0, 1.0, 0.5), "d", np.linspace(0.3, 1.5, 10)),
    (SpherePlate(1.0, 2.0), "d", np.linspace(1.6, 5.0, 10)),
    (CylinderPlate(0.1, 1.0, constant(3.0), perfect_conductor()), "d", np.linspace(0.5, 2.0, 10)),
)


def check_properties() -> list[CheckOutcome]:
    quadrature = QuadratureSpec(initial_nodes=16, max_levels=3, rtol=1e-4)
    truncation = TruncationPolicy(initial=6, increment=2, rtol=1e-3, cap=10)
    out = []
    for geometry, parameter, grid in _PROPERTY_GEOMETRIES:
        pipeline = build_pipeline(geometry)
        kappas = np.geomspace(1e-3, 20.0, 12) / pipeline.d_char
        samples = [v.value for v in sample_integrand(pipeline, kappas, order=6)]
        out.append(
            CheckOutcome(f"{geometry.variant}: log det <= 0", all(v <= 0.0 for v in samples), f"max {max(samples):.2e}")
        )
        energies = []
        for value in grid:
            point = with_parameter(geometry, parameter, float(value))
            policy = truncation if build_pipeline(point).truncation else None
            energies.append(abs(evaluate(point, quadrature=quadrature, truncation=policy).value))
        # the enclosed cylinder gains energy as it moves off axis
        steps = np.diff(energies)
        monotone = np.all(steps > 0) if isinstance(geometry, CylinderInCylinder) else np.all(steps < 0)
        out.append(CheckOutcome(f"{geometry.variant}: |E| monotone over {parameter}", bool(monotone), f"{len(grid)} points"))
    return out


SUITES: dict[str, Callable[[], list[CheckOutcome]]] = {
    "specfun": check_specfun,
    "wigner": check_wigner,
    "translation": check_translation,
    "greens-function": check_greens_function,
    "lifshitz": check_lifshitz,
    "pipeline": check_pipeline,
    "atoms": check_atoms,
    "sphere-plate": check_sphere_plate,
    "cylinder-plate": check_cylinder_plate,
    "matsubara": check_matsubara,
    "properties": check_properties,
}


def _run_suite(name: str) -> list[CheckOutcome]:
    """Outcomes of one suite; a numerical failure inside it is a failed outcome."""
    logger.info("running check suite %s", name)
    try:
        return SUITES[name]()
    except ArithmeticError as exc:
        logger.debug("check suite %s raised", name, exc_info=True)
        return [CheckOutcome("suite completed", False, f"{type(exc).__name__}: {exc}")]


def run_check(suite: str) -> CheckReport:
    """Run one named suite, or every suite for ``"all"``."""
    if suite == "all":
        report = CheckReport("all")
        for name in SUITES:
            report.outcomes.extend(dataclasses.replace(o, name=f"{name}: {o.name}") for o in _run_suite(name))
        return report
    if suite not in SUITES:
        raise ConfigError(f"unknown check suite {suite!r}; {did_you_mean(suite, [*SUITES, 'all'])}")
    return CheckReport(suite, _run_suite(suite))
