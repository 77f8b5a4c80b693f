"""Tests for translation matrices."""

import cmath
import math

import numpy as np
import pytest

from casimir_cli.errors import GeometryError, SelectionError
from casimir_cli.physics.scattering import ChannelBasis, Polarization
from casimir_cli.physics.translation import (
    Displacement,
    PairConfiguration,
    PairKind,
    TranslationKind,
    assemble_X,
    cyl_U,
    cyl_U_block,
    cyl_V,
    cyl_V_block,
    cyl_W_block,
    plane_V,
    plane_V_block,
    plane_W,
    plane_W_block,
    sph_U,
    sph_U_block,
    sph_V,
    sph_V_block,
    sph_W,
    sph_W_block,
)

M, E = Polarization.M, Polarization.E


def test_displacement_geometry():
    X = Displacement(3.0, 4.0, 12.0)
    assert X.norm == pytest.approx(13.0)
    assert X.perp == pytest.approx(5.0)
    assert X.azimuth == pytest.approx(math.atan2(4, 3))
    assert (-X).vector.tolist() == [-3.0, -4.0, -12.0]
    assert Displacement.along_z(2.0).polar == 0.0


def test_plane_translations():
    X = Displacement(0.5, 0.0, 2.0)
    expected = cmath.exp(-0.5j - math.sqrt(2) * 2.0)
    assert plane_V(1.0, [1.0, 0.0], "M", X) == pytest.approx(expected)
    assert plane_W(1.0, [1.0, 0.0], "E", X) == pytest.approx(expected.conjugate())

    basis = ChannelBasis.plane(1.0, np.array([[1.0, 0.0], [0.0, 2.0]]))
    V = plane_V_block(basis, X)
    W = plane_W_block(basis, X)
    assert V.is_diagonal
    assert np.allclose(W.matrix, np.conj(V.matrix))
    with pytest.raises(GeometryError):
        plane_V_block(basis, Displacement(0.0, 0.0, -1.0))


def test_cylindrical_elements_match_blocks():
    basis = ChannelBasis.cylindrical(0.8, 0.3, nmax=3)
    X = Displacement(1.5, 0.5, 0.2)
    U = cyl_U_block(basis, X).dense()
    V = cyl_V_block(basis, Displacement(0.3, -0.2, 0.1)).dense()
    for n in (-3, 0, 2):
        for n_prime in (-1, 3):
            i, j = basis.index((n, E)), basis.index((n_prime, E))
            assert U[i, j] == pytest.approx(cyl_U(0.8, 0.3, n, n_prime, X), rel=1e-12)
            assert V[i, j] == pytest.approx(cyl_V(0.8, 0.3, n, n_prime, Displacement(0.3, -0.2, 0.1)), rel=1e-12)
    # polarizations do not mix
    assert U[basis.index((0, E)), basis.index((0, M))] == 0.0


def test_cylindrical_u_adjoint():
    basis = ChannelBasis.cylindrical(1.0, 0.4, nmax=5)
    X = Displacement(1.2, 0.7, -0.5)
    U = cyl_U_block(basis, X).dense()
    assert np.allclose(U, np.conj(cyl_U_block(basis, -X).dense()).T, rtol=1e-10, atol=0)


def test_cylindrical_w_flips_z_phase():
    basis = ChannelBasis.cylindrical(1.0, 0.4, nmax=2)
    X = Displacement(0.0, 0.0, 0.7)
    V = cyl_V_block(basis, X).dense()
    W = cyl_W_block(basis, X).dense()
    assert np.allclose(np.diag(V), np.exp(-0.4j * 0.7))
    assert np.allclose(np.diag(W), np.exp(0.4j * 0.7))


def test_outgoing_translation_needs_displacement():
    with pytest.raises(GeometryError):
        cyl_U_block(ChannelBasis.cylindrical(1.0, 0.0, 1), Displacement(0.0, 0.0, 1.0))
    with pytest.raises(GeometryError):
        sph_U(1.0, (1, 0, M), (1, 0, M), Displacement(0.0, 0.0, 0.0))


def test_regular_translation_at_origin_is_identity():
    basis = ChannelBasis.spherical(1.3, lmax=3)
    V = sph_V_block(basis, Displacement(0.0, 0.0, 0.0)).dense()
    assert np.allclose(V, np.eye(len(basis)), atol=1e-13)


def test_spherical_elements_match_blocks():
    kappa = 0.9
    X = Displacement(0.4, -0.2, 1.7)
    basis = ChannelBasis.spherical(kappa, lmax=3)
    U = sph_U_block(basis, X).dense()
    V = sph_V_block(basis, X).dense()
    W = sph_W_block(basis, X).dense()
    for row in [(1, 0, M), (2, -1, E), (3, 2, M)]:
        for col in [(1, 1, E), (2, 0, M), (3, -2, E)]:
            i, j = basis.index(row), basis.index(col)
            assert U[i, j] == pytest.approx(sph_U(kappa, row, col, X), rel=1e-10, abs=1e-14)
            assert V[i, j] == pytest.approx(sph_V(kappa, row, col, X), rel=1e-10, abs=1e-14)
            assert W[i, j] == pytest.approx(sph_W(kappa, row, col, X), rel=1e-10, abs=1e-14)


def test_spherical_u_weighted_adjoint():
    basis = ChannelBasis.spherical(1.0, lmax=3)
    X = Displacement(0.3, -0.4, 2.5)
    U = sph_U_block(basis, X).dense()
    c = basis.norms
    expected = np.conj(sph_U_block(basis, -X).dense()).T * (c[:, None] / c[None, :])
    assert np.allclose(U, expected, rtol=1e-10, atol=1e-14)


def test_spherical_polarization_mixing_vanishes_on_axis_for_m_zero():
    # along z the mixed element is proportional to m
    basis = ChannelBasis.spherical(1.0, lmax=2, m=0)
    U = sph_U_block(basis, Displacement.along_z(2.0)).dense()
    assert U[basis.index((1, 0, E)), basis.index((2, 0, M))] == 0.0


def test_invalid_spherical_channel():
    with pytest.raises(SelectionError):
        sph_V(1.0, (0, 0, M), (1, 0, M), Displacement(0.0, 0.0, 1.0))


def test_assemble_x_pairs_kinds():
    basis = ChannelBasis.cylindrical(1.0, 0.0, nmax=1)
    U_ab = cyl_U_block(basis, Displacement(3.0, 0.0, 0.0))
    U_ba = cyl_U_block(basis, Displacement(-3.0, 0.0, 0.0))
    pair = PairConfiguration(PairKind.OUTSIDE, 1.0, 1.0, 3.0)
    X_ab, X_ba = assemble_X(pair, U_ab, U_ba)
    assert np.allclose(X_ab.dense(), -U_ab.dense())
    assert X_ba.kind is TranslationKind.U

    with pytest.raises(GeometryError):
        assemble_X(PairConfiguration(PairKind.OUTSIDE, 1.0, 1.0, 1.5), U_ab, U_ba)
    with pytest.raises(GeometryError):
        assemble_X(PairConfiguration(PairKind.A_ENCLOSES_B, 3.0, 1.0, 0.5), U_ab, U_ba)
