"""Tests for run configuration parsing."""

import json

import numpy as np
import pytest

from casimir_cli.errors import ConfigError, GeometryError
from casimir_cli.models.geometry import ParallelPlates, SpherePlate, TwoAtoms
from casimir_cli.models.results import TruncationPolicy
from casimir_cli.models.run import load_run_config, parse_run_config, run_config_schema
from casimir_cli.physics.materials import MaterialKind


def _plates(**extra):
    return {"geometry": {"variant": "parallel_plates", "d": 1.0}, **extra}


def test_geometry_variant_selects_model():
    config = parse_run_config({"geometry": {"variant": "two_atoms", "d": 2.0, "alpha0": 1e-6, "d10": 1e-3}})
    geometry = config.to_geometry()
    assert isinstance(geometry, TwoAtoms)
    assert geometry.mode == "full_log"
    assert config.beta is None
    assert config.output.format == "csv"


def test_materials_are_built_and_referenced():
    config = parse_run_config(
        {
            "geometry": {"variant": "sphere_plate", "radius": 1.0, "d": 3.0, "material_sphere": "glass"},
            "materials": {"glass": {"kind": "constant", "eps0": 2.25}, "gold": {"kind": "drude", "plasma": 45.0}},
            "medium": "gold",
        }
    )
    geometry = config.to_geometry()
    assert isinstance(geometry, SpherePlate)
    assert geometry.material_sphere.eps0 == 2.25
    assert geometry.material_plate.kind is MaterialKind.PERFECT_CONDUCTOR
    assert config.to_medium().material.kind is MaterialKind.DRUDE


def test_tabulated_material_relative_to_config(tmp_path):
    (tmp_path / "eps.csv").write_text("kappa,eps\n0.1,4.0\n1.0,3.0\n10.0,2.0\n")
    config = parse_run_config(
        _plates(materials={"film": {"kind": "tabulated", "file": "eps.csv"}}, medium="film")
    )
    assert config.to_medium(tmp_path).material.kind is MaterialKind.TABULATED


def test_unknown_material_suggests_name():
    with pytest.raises(ConfigError, match="glas"):
        parse_run_config(
            {
                "geometry": {"variant": "parallel_plates", "d": 1.0, "material_a": "glas"},
                "materials": {"glass": {"kind": "constant", "eps0": 2.25}},
            }
        )


@pytest.mark.parametrize(
    "data",
    [
        {"geometry": {"variant": "disc", "d": 1.0}},
        {"geometry": {"variant": "parallel_plates", "d": -1.0}},
        {"geometry": {"variant": "parallel_plates", "d": 1.0, "radius": 2.0}},
        _plates(materials={"x": {"kind": "drude"}}),
        _plates(materials={"x": {"kind": "tabulated"}}),
        _plates(beta=0.0),
        _plates(length_unit="ly"),
    ],
)
def test_invalid_documents(data):
    with pytest.raises(ConfigError):
        parse_run_config(data)


def test_sweep_grid():
    config = parse_run_config(_plates(sweep={"parameter": "d", "start": 1.0, "stop": 100.0, "num": 3, "spacing": "log"}))
    assert config.sweep.grid() == pytest.approx([1.0, 10.0, 100.0])
    config = parse_run_config(_plates(sweep={"parameter": "d", "values": [3.0, 2.0, 1.0]}))
    assert np.array_equal(config.sweep.grid(), [3.0, 2.0, 1.0])


@pytest.mark.parametrize(
    "sweep",
    [
        {"parameter": "d", "values": [1.0, 3.0, 2.0]},
        {"parameter": "d", "values": []},
        {"parameter": "d", "start": 1.0, "stop": 2.0},
        {"parameter": "d", "start": 0.0, "stop": 2.0, "num": 3, "spacing": "log"},
        {"parameter": "material_a", "values": [1.0]},
        {"parameter": "dd", "values": [1.0]},
    ],
)
def test_invalid_sweeps(sweep):
    with pytest.raises(ConfigError):
        parse_run_config(_plates(sweep=sweep))


def test_sweep_parameter_suggestion():
    with pytest.raises(ConfigError, match="radius"):
        parse_run_config(
            {
                "geometry": {"variant": "sphere_plate", "radius": 1.0, "d": 3.0},
                "sweep": {"parameter": "radios", "values": [1.0]},
            }
        )


def test_numerics_overrides():
    config = parse_run_config(_plates(numerics={"rtol": 1e-5, "initial_nodes": 8, "lmax_initial": 20, "lmax_cap": 16}))
    quadrature = config.numerics.quadrature()
    assert (quadrature.initial_nodes, quadrature.rtol) == (8, 1e-5)
    assert config.numerics.quadrature(rtol=1e-3).rtol == 1e-3
    policy = config.numerics.truncation(TruncationPolicy())
    assert (policy.initial, policy.cap) == (16, 16)
    assert config.numerics.truncation(TruncationPolicy(), cap=40).cap == 40
    assert config.numerics.truncation(None) is None


def test_error_lists_field_path():
    with pytest.raises(ConfigError) as info:
        parse_run_config({"geometry": {"variant": "two_atoms", "d": 1.0, "alpha0": 1e-6, "d10": 0.0}})
    assert "geometry.two_atoms.d10" in str(info.value)


def test_geometry_checks_run_on_build():
    config = parse_run_config({"geometry": {"variant": "sphere_plate", "radius": 2.0, "d": 1.0}})
    with pytest.raises(GeometryError, match="touches"):
        config.to_geometry()


def test_load_run_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(_plates(length_unit="nm")))
    config = load_run_config(path)
    assert config.length_unit == "nm"
    assert isinstance(config.to_geometry(), ParallelPlates)
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.json")
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_run_config(path)


def test_schema_lists_variants():
    schema = json.loads(run_config_schema())
    text = json.dumps(schema)
    for variant in ("two_atoms", "parallel_plates", "cylinder_in_cylinder", "cylinder_plate"):
        assert variant in text
