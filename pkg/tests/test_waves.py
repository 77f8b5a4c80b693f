"""Tests for vector waves and the free Green's function expansions."""

import numpy as np
import pytest

from casimir_cli.physics import waves
from casimir_cli.physics.scattering import ChannelBasis


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def test_free_greens_is_symmetric():
    x, xp = np.array([0.3, -0.2, 1.1]), np.array([-0.4, 0.5, 0.2])
    G = waves.free_greens(1.3, x, xp)
    assert np.allclose(G, G.T)
    assert np.allclose(G, waves.free_greens(1.3, xp, x))
    with pytest.raises(ValueError):
        waves.free_greens(1.0, x, x)


def test_spherical_series():
    x, xp = np.array([0.6, -0.8, 0.9]), np.array([0.1, 0.15, -0.2])
    G = waves.free_greens(1.0, x, xp)
    assert _rel(waves.greens_spherical_series(1.0, x, xp, 15), G) < 1e-6
    with pytest.raises(ValueError):
        waves.greens_spherical_series(1.0, xp, x, 5)


def test_translated_series():
    origin_tgt = np.array([0.4, -0.3, 1.9])
    x = origin_tgt + np.array([0.05, 0.08, -0.06])
    xp = np.array([-0.07, 0.04, 0.1])
    G = waves.free_greens(1.0, x, xp)
    assert _rel(waves.greens_translated_series(1.0, x, xp, np.zeros(3), origin_tgt, 8), G) < 1e-6


def test_cylindrical_series():
    x, xp = np.array([1.2, 0.5, 0.1]), np.array([-0.1, 0.2, -0.2])
    G = waves.free_greens(1.0, x, xp)
    assert _rel(waves.greens_cylindrical_series(1.0, x, xp, 15), G) < 1e-6


def test_cylindrical_series_far_from_axis():
    # the k_z nodes reach p rho ~ 3e4, where exp(p rho) overflows a double
    x, xp = np.array([2.0, 0.3, 0.4]), np.array([0.1, 0.0, -0.1])
    G = waves.free_greens(0.8, x, xp)
    out = waves.greens_cylindrical_series(0.8, x, xp, 15)
    assert np.all(np.isfinite(out))
    assert _rel(out, G) < 1e-6


@pytest.mark.parametrize("regular", [True, False])
def test_scaled_cylindrical_waves(regular):
    point = np.array([0.7, -0.4, 0.3])
    basis = ChannelBasis.cylindrical(1.1, 0.5, 4)
    scaled, log_scale = waves.cylindrical_waves_scaled(basis, point, regular)
    assert np.allclose(scaled * np.exp(log_scale), waves.cylindrical_waves(basis, point, regular))

    far = ChannelBasis.cylindrical(1.0, 2.0e4, 4)
    scaled, log_scale = waves.cylindrical_waves_scaled(far, point, regular)
    assert np.all(np.isfinite(scaled))
    assert abs(log_scale) > 709


def test_plane_series():
    x, xp = np.array([0.1, -0.2, 0.4]), np.array([-0.2, 0.1, -0.4])
    G = waves.free_greens(1.0, x, xp)
    assert _rel(waves.greens_plane_series(1.0, x, xp), G) < 1e-4


def test_waves_are_divergence_free():
    basis = ChannelBasis.spherical(1.0, lmax=2)
    point, h = np.array([0.3, 0.4, 0.5]), 1e-5
    div = np.zeros(len(basis), dtype=complex)
    for axis in range(3):
        step = np.zeros(3)
        step[axis] = h
        plus = waves.spherical_waves(basis, point + step, regular=False)
        minus = waves.spherical_waves(basis, point - step, regular=False)
        div += (plus[:, axis] - minus[:, axis]) / (2 * h)
    scale = np.abs(waves.spherical_waves(basis, point, regular=False)).max()
    assert np.abs(div).max() < 1e-6 * scale


def test_plane_wave_reconstruction():
    point = np.array([0.2, -0.1, 0.3])
    k_perp = np.array([0.7, -0.4])
    for pol in ("M", "E"):
        rebuilt = waves.plane_wave_from_spherical(1.0, k_perp, pol, point, 12)
        assert _rel(rebuilt, waves.plane_wave(1.0, k_perp, pol, point)) < 1e-9

    point = np.array([0.2, -0.3, 0.1])
    for pol in ("M", "E"):
        rebuilt = waves.plane_wave_from_cylindrical(1.0, 0.6, 0.3, pol, point, 16)
        assert _rel(rebuilt, waves.plane_wave_along_x(1.0, 0.6, 0.3, pol, point)) < 1e-9
