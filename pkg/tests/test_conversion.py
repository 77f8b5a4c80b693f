"""Tests for plane-wave conversion matrices."""

import numpy as np
import pytest

from casimir_cli.errors import SelectionError
from casimir_cli.physics.conversion import (
    conjugate_by_D,
    plane_to_cylindrical,
    plane_to_cylindrical_block,
    plane_to_spherical,
    plane_to_spherical_block,
    spherical_prefactor,
)
from casimir_cli.physics.materials import perfect_conductor
from casimir_cli.physics.scattering import ChannelBasis, Polarization, mie_block


def test_spherical_prefactor():
    assert spherical_prefactor(1, 0) == pytest.approx(np.sqrt(4 * np.pi * 3 / 2))


def test_m_zero_does_not_mix_polarizations():
    assert plane_to_spherical(1.0, [0.5, 0.2], (2, 0, "E"), "M") == 0.0


def test_spherical_conversion_rejects_bad_input():
    with pytest.raises(SelectionError):
        plane_to_spherical(1.0, [0.5, 0.0], (1, 2, "E"), "E")
    with pytest.raises(ValueError):
        plane_to_spherical(1.0, [0.0, 0.0], (1, 0, "E"), "E")
    with pytest.raises(ValueError):
        plane_to_cylindrical(1.0, 0.0, 0.0, 0, "E", "E")


def test_block_layout():
    plane = ChannelBasis.plane(1.0, np.array([[0.5, 0.1], [0.2, -0.3]]))
    sph = ChannelBasis.spherical(1.0, lmax=2)
    D = plane_to_spherical_block(plane, sph)
    assert D.matrix.shape == (len(sph), len(plane))
    j = plane.index((1, Polarization.E))
    i = sph.index((2, -1, Polarization.M))
    assert D.matrix[i, j] == pytest.approx(plane_to_spherical(1.0, [0.2, -0.3], (2, -1, "M"), "E"))

    with pytest.raises(ValueError):
        plane_to_spherical_block(plane, ChannelBasis.spherical(2.0, lmax=2))


def test_cylindrical_block_needs_shared_kz():
    cyl = ChannelBasis.cylindrical(1.0, 0.4, nmax=2)
    good = ChannelBasis.plane(1.0, np.array([[0.3, 0.4], [-0.6, 0.4]]))
    D = plane_to_cylindrical_block(good, cyl)
    assert D.matrix.shape == (len(cyl), len(good))
    with pytest.raises(ValueError):
        plane_to_cylindrical_block(ChannelBasis.plane(1.0, np.array([[0.3, 0.1]])), cyl)


def test_conjugated_sphere_amplitude_is_hermitian_up_to_norms():
    kappa = 1.0
    plane = ChannelBasis.plane(kappa, np.array([[0.4, 0.0], [0.0, 0.9], [-0.3, 0.5]]))
    sph = ChannelBasis.spherical(kappa, lmax=4)
    F = conjugate_by_D(mie_block(perfect_conductor(), 0.5, sph), plane_to_spherical_block(plane, sph))
    assert F.basis is plane
    matrix = F.dense()
    c = plane.norms
    # F_ab / C_a is Hermitian when the compact amplitude is real and diagonal
    scaled = matrix / c[:, None]
    assert np.allclose(scaled, np.conj(scaled).T, rtol=1e-10, atol=1e-14)
