import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from holevo_limits.spin import (
    EulerGrid,
    as_two_j,
    coupled_basis,
    euler_to_rotation,
    rotation_to_euler,
    spin_matrices,
    total_spin_matrices,
    wigner_d,
)

angles = st.floats(0, 2 * math.pi, allow_nan=False)


@pytest.mark.parametrize("two_j", range(0, 9))
def test_spin_algebra(two_j):
    jx, jy, jz = spin_matrices(two_j)
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz, atol=1e-12)
    j = two_j / 2
    assert np.allclose(jx @ jx + jy @ jy + jz @ jz, j * (j + 1) * np.eye(two_j + 1), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(two_j=st.integers(0, 8), a=angles, b=st.floats(0, math.pi), g=angles)
def test_wigner_matches_exponentials(two_j, a, b, g):
    _, jy, jz = spin_matrices(two_j)
    ref = expm(-1j * a * jz) @ expm(-1j * b * jy) @ expm(-1j * g * jz)
    assert np.allclose(wigner_d(two_j, a, b, g), ref, atol=1e-12)


def test_spin_half_rotation_is_pauli_exponential():
    d = wigner_d(1, 0.0, math.pi, 0.0)
    assert np.allclose(np.abs(d), [[0, 1], [1, 0]], atol=1e-12)


def test_as_two_j():
    assert as_two_j(0.5) == 1
    assert as_two_j(3) == 6
    with pytest.raises(ValueError):
        as_two_j(0.3)


@settings(max_examples=40, deadline=None)
@given(a=angles, b=st.floats(0.01, math.pi - 0.01), g=angles)
def test_euler_round_trip(a, b, g):
    r = euler_to_rotation(a, b, g)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert np.allclose(euler_to_rotation(*rotation_to_euler(r)), r, atol=1e-9)


def test_gimbal_lock_round_trip():
    r = euler_to_rotation(0.4, 0.0, 1.1)
    assert np.allclose(euler_to_rotation(*rotation_to_euler(r)), r, atol=1e-12)


def test_grid_measures_are_haar():
    g = EulerGrid(4, 6, 5)
    w = g.measures()
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    # beta marginal of the Haar measure is sin(beta)/2
    wb = w.reshape(4, 6, 5).sum(axis=(0, 2))
    edges = np.linspace(0, math.pi, 7)
    assert np.allclose(wb, (np.cos(edges[:-1]) - np.cos(edges[1:])) / 2)


def test_cell_index_recovers_centres():
    g = EulerGrid.cubic(6)
    assert np.array_equal(g.cell_index(g.rotations()), np.arange(g.size))


def test_coupled_basis_two_qubits():
    blocks, u = coupled_basis([1, 1])
    assert blocks == [(2, 1), (0, 1)]
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    jx, jy, jz = total_spin_matrices([1, 1])
    j2 = u.conj().T @ (jx @ jx + jy @ jy + jz @ jz) @ u
    assert np.allclose(np.diag(j2).real, [2, 2, 2, 0], atol=1e-12)
    assert np.allclose(j2, np.diag(np.diag(j2)), atol=1e-12)


def test_coupled_basis_four_qubits():
    blocks, u = coupled_basis([1, 1, 1, 1])
    assert blocks == [(4, 1), (2, 3), (0, 2)]
    assert np.allclose(u.conj().T @ u, np.eye(16), atol=1e-10)
