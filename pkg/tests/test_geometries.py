"""Tests for the built-in geometries."""

import dataclasses
import math

import pytest
from scipy import special

from casimir_cli.checks import CYLINDER_MOMENTA, CYLINDER_PAIRS
from casimir_cli.compute.energy import integrate_energy, sample_integrand
from casimir_cli.compute.geometries import (
    build_pipeline,
    cylinder_plate_energy,
    cylinder_plate_pipeline,
    evaluate,
    lifshitz_energy,
    phi_integrals,
    plane_pipeline,
    plate_pipeline,
    sphere_plate_energy,
    sphere_plate_pipeline,
    static_polarizabilities,
    two_atoms_energy,
    two_atoms_pipeline,
    two_cylinders_energy,
    two_cylinders_pipeline,
)
from casimir_cli.errors import ConfigError, GeometryError
from casimir_cli.models.geometry import (
    CylinderInCylinder,
    CylinderPlate,
    ParallelPlates,
    SpherePlate,
    TwoAtoms,
    TwoCylindersOuter,
)
from casimir_cli.models.results import QuadratureSpec, TruncationPolicy
from casimir_cli.physics.materials import Medium, constant, perfect_conductor, vacuum

PEC_PLATES = -(math.pi**2) / 720

FAST_QUADRATURE = QuadratureSpec(initial_nodes=16, max_levels=3, rtol=1e-4)
FAST_TRUNCATION = TruncationPolicy(initial=6, increment=2, rtol=1e-3, cap=12)


@pytest.mark.parametrize("d", [1.0, 2.5])
def test_lifshitz_perfect_conductors(d):
    assert lifshitz_energy(d, perfect_conductor(), perfect_conductor()) == pytest.approx(PEC_PLATES / d**3, rel=1e-8)


def test_lifshitz_dielectrics_are_weaker():
    pec = lifshitz_energy(1.0, perfect_conductor(), perfect_conductor())
    glass = lifshitz_energy(1.0, constant(4.0), constant(4.0))
    assert pec < glass < 0
    assert lifshitz_energy(1.0, vacuum(), perfect_conductor()) == 0.0


def test_plate_pipeline_integrates_to_lifshitz():
    result = integrate_energy(plate_pipeline(1.0, perfect_conductor(), perfect_conductor()))
    assert result.per_unit == "area"
    assert result.value == pytest.approx(PEC_PLATES, rel=1e-5)


@pytest.mark.parametrize("kappa", [0.1, 1.0, 5.0])
def test_plane_basis_matches_plate_integrand(kappa):
    a, b = constant(4.0), constant(2.0)
    plane = sample_integrand(plane_pipeline(1.0, a, b), [kappa])[0]
    direct = sample_integrand(plate_pipeline(1.0, a, b), [kappa])[0]
    assert plane.value == pytest.approx(direct.value, rel=1e-8)


def test_plane_basis_is_vacuum_only():
    pipeline = plane_pipeline(1.0, constant(4.0), constant(4.0))
    with pytest.raises(ConfigError):
        pipeline.factory(Medium(constant(1.77)))


def test_casimir_polder_limit():
    alpha0 = 1e-6
    energy = two_atoms_energy(1.0, alpha0, 1e-3)
    assert energy / alpha0**2 == pytest.approx(-23 / (4 * math.pi), rel=5e-3)


def test_london_limit():
    alpha0, d10 = 1e-6, 1e3
    energy = two_atoms_energy(1.0, alpha0, d10)
    assert energy * d10 / alpha0**2 == pytest.approx(-0.75, rel=5e-3)


def test_atom_modes_agree_for_weak_coupling():
    full = two_atoms_energy(1.0, 1e-4, 0.5, "full_log")
    quadratic = two_atoms_energy(1.0, 1e-4, 0.5, "quadratic")
    assert full == pytest.approx(quadratic, rel=1e-6)
    with pytest.raises(GeometryError):
        two_atoms_energy(1.0, 1e-4, 0.5, "exact")


def test_general_atom_blocks_match_closed_product():
    closed = two_atoms_pipeline(1.0, 0.05, 0.3)
    general = two_atoms_pipeline(1.0, 0.05, 0.3, general=True)
    for kappa in (0.2, 1.0, 3.0):
        a = sample_integrand(closed, [kappa])[0].value
        b = sample_integrand(general, [kappa])[0].value
        assert b == pytest.approx(a, rel=1e-8)


@pytest.mark.parametrize(
    "specialized", CYLINDER_PAIRS, ids=lambda g: f"{g.variant}-{g.radius_a:g}-{g.radius_b:g}-{g.d:g}"
)
def test_general_cylinder_blocks_match_specialized(specialized):
    general = dataclasses.replace(specialized, mode="general")
    for p in CYLINDER_MOMENTA:
        a = two_cylinders_pipeline(specialized).polar(p, 6)
        b = two_cylinders_pipeline(general).polar(p, 6)
        assert b == pytest.approx(a, rel=1e-8, abs=1e-20), p


@pytest.mark.parametrize(
    "specialized",
    [CylinderInCylinder(3.0, 1.0, 0.5), TwoCylindersOuter(1.0, 1.0, 3.0)],
    ids=["inner", "outer"],
)
def test_general_cylinder_energy_matches_specialized(specialized):
    # the quadrature reaches momenta far beyond 1 / gap
    general = dataclasses.replace(specialized, mode="general")
    a = evaluate(specialized, quadrature=FAST_QUADRATURE, truncation=FAST_TRUNCATION)
    b = evaluate(general, quadrature=FAST_QUADRATURE, truncation=FAST_TRUNCATION)
    assert math.isfinite(b.value)
    assert b.value < 0
    assert b.value == pytest.approx(a.value, rel=1e-6)


def test_two_cylinders_attract():
    near = two_cylinders_energy(1.0, 1.0, 2.5, quadrature=FAST_QUADRATURE, truncation=FAST_TRUNCATION)
    far = two_cylinders_energy(1.0, 1.0, 3.5, quadrature=FAST_QUADRATURE, truncation=FAST_TRUNCATION)
    assert near.value < far.value < 0
    assert near.per_unit == "length"
    with pytest.raises(ConfigError):
        two_cylinders_energy(1.0, 1.0, 3.0, configuration="sideways")


def test_offset_inner_cylinder_lowers_energy():
    centered = two_cylinders_energy(3.0, 1.0, 0.2, "inner", FAST_QUADRATURE, FAST_TRUNCATION)
    offset = two_cylinders_energy(3.0, 1.0, 0.8, "inner", FAST_QUADRATURE, FAST_TRUNCATION)
    assert offset.value < centered.value < 0


def test_cylinder_pipeline_kappa_and_polar_forms_agree():
    pipeline = two_cylinders_pipeline(TwoCylindersOuter(1.0, 1.0, 3.0))
    polar = integrate_energy(pipeline, FAST_QUADRATURE, FAST_TRUNCATION)
    direct = integrate_energy(dataclasses.replace(pipeline, polar=None), FAST_QUADRATURE, FAST_TRUNCATION)
    assert direct.value == pytest.approx(polar.value, rel=1e-3)


def test_sphere_plate_blocked_matches_full_matrix():
    geometry = SpherePlate(1.0, 2.0, constant(3.0), perfect_conductor())
    blocked = sample_integrand(sphere_plate_pipeline(geometry), [0.7], order=5)[0]
    full = sample_integrand(sphere_plate_pipeline(geometry, blocked=False), [0.7], order=5)[0]
    assert blocked.value == pytest.approx(full.value, rel=1e-10)
    assert blocked.value < 0


def test_sphere_plate_large_distance_limit():
    expected = -9 / (16 * math.pi * 10.0**4)
    assert sphere_plate_energy(1.0, 10.0, perfect_conductor(), perfect_conductor(), "asymptotic") == pytest.approx(
        expected, rel=1e-10
    )


def test_static_polarizabilities():
    assert static_polarizabilities(perfect_conductor(), 2.0) == pytest.approx((-4.0, 8.0))
    assert static_polarizabilities(constant(3.0), 1.0) == pytest.approx((0.0, 0.4))


def test_phi_integrals():
    pec = perfect_conductor()
    assert phi_integrals(pec, "sphere_E") == pytest.approx(1.0)
    assert phi_integrals(pec, "sphere_M") == pytest.approx(-1.0)
    assert phi_integrals(pec, "cylinder_E") == pytest.approx(1.0)
    assert phi_integrals(vacuum(), "sphere_E") == pytest.approx(0.0, abs=1e-14)
    assert 0 < phi_integrals(constant(5.0), "sphere_E") < 1
    with pytest.raises(ConfigError):
        phi_integrals(pec, "torus")


def test_cylinder_plate_asymptotes():
    R, d = 0.1, 10.0
    pec_cylinder = cylinder_plate_energy(R, d, perfect_conductor(), perfect_conductor(), "asymptotic_pec_cylinder")
    assert pec_cylinder == pytest.approx(1 / (16 * math.pi * d**2 * math.log(R / d)))

    balanced = cylinder_plate_energy(R, d, constant(2.0, 2.0), perfect_conductor(), "asymptotic_pec_plate")
    assert balanced == pytest.approx(0.0, abs=1e-20)

    dielectric = cylinder_plate_energy(R, d, constant(3.0), perfect_conductor(), "asymptotic_dielectric")
    assert dielectric < 0
    with pytest.raises(ConfigError):
        cylinder_plate_energy(R, d, perfect_conductor(), perfect_conductor(), "asymptotic_dielectric")


def test_cylinder_plate_pipeline_modes():
    with pytest.raises(ConfigError):
        cylinder_plate_pipeline(CylinderPlate(0.1, 1.0, perfect_conductor(), perfect_conductor(), "full_smallR"))
    with pytest.raises(ConfigError):
        cylinder_plate_pipeline(CylinderPlate(0.1, 1.0, constant(3.0), perfect_conductor(), "full_pec_logmode"))
    pipeline = build_pipeline(CylinderPlate(0.1, 1.0, constant(3.0), perfect_conductor(), "asymptotic_dielectric"))
    assert pipeline.name == "cylinder_plate"
    assert sample_integrand(pipeline, [1.0])[0].value < 0


def test_evaluate_closed_form_and_pipeline():
    closed = evaluate(ParallelPlates(1.0))
    assert closed.value == pytest.approx(PEC_PLATES, rel=1e-8)
    assert closed.per_unit == "area"
    assert closed.diagnostics["mode"] == "lifshitz"

    atoms = evaluate(TwoAtoms(1.0, 1e-6, 1e-3, "general"), quadrature=FAST_QUADRATURE)
    assert atoms.value / 1e-12 == pytest.approx(-23 / (4 * math.pi), rel=2e-2)


def test_high_temperature_plates():
    beta = 0.2
    result = evaluate(ParallelPlates(1.0), beta=beta)
    assert beta * result.value == pytest.approx(-special.zeta(3) / (8 * math.pi), rel=1e-4)


def test_geometry_validation():
    with pytest.raises(GeometryError):
        evaluate(TwoCylindersOuter(1.0, 1.0, 1.5))
    with pytest.raises(GeometryError):
        evaluate(SpherePlate(1.0, 0.5))
    with pytest.raises(GeometryError):
        CylinderInCylinder(1.0, 3.0, 2.5).validate()
