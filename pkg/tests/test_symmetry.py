import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holevo_limits.holevo import SignalEnsemble
from holevo_limits.qstate import DensityOperator, Distribution, StateError, frobenius_distance, random_density, random_pure, von_neumann_entropy
from holevo_limits.spin import EulerGrid
from holevo_limits.symmetry import (
    NumberObservable,
    SpinDecomposition,
    asymmetry_number_entropy_bound_check,
    ensemble_twirl_identity_check,
    g_asymmetry_so3,
    g_asymmetry_so3_closed_form,
    g_asymmetry_u1,
    jmax_asymmetry_bound,
    jmax_saturated,
    mode_number,
    number_operator,
    phase_shift,
    phase_shift_ensemble,
    phase_twirl,
    so3_grid_twirl,
    so3_twirl,
    total_number,
    uniform_phase_grid,
)

PAULIS = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]


def noon(n):
    psi = np.zeros((n + 1) ** 2, dtype=complex)
    psi[n * (n + 1)] = psi[n] = 1
    return DensityOperator.from_ket(psi), [n + 1, n + 1]


def test_number_observable_validation():
    with pytest.raises(StateError):
        NumberObservable.from_operator(np.diag([0.0, 0.5]))
    n = NumberObservable.from_operator(np.diag([2.0, 0.0, 2.0]))
    assert list(n.eigenvalues) == [0, 2]
    assert list(n.degeneracies) == [1, 2]
    p = NumberObservable.from_projectors([0, 1], [np.diag([1, 0]), np.diag([0, 1])])
    assert np.allclose(p.operator, np.diag([0, 1]))


def test_phase_twirl_examples():
    rho = DensityOperator.diagonal([0.2, 0.5, 0.3])
    assert frobenius_distance(phase_twirl(rho, number_operator(3)), rho) < 1e-12
    plus = DensityOperator.from_ket([1, 1])
    assert frobenius_distance(phase_twirl(plus, number_operator(2)), DensityOperator.maximally_mixed(2)) < 1e-12


def test_twirl_equals_uniform_phase_average():
    rho = random_density(4, seed=3)
    n = number_operator(4)
    avg = sum(rho.conjugate(phase_shift(n, t)).matrix for t in uniform_phase_grid(8)) / 8
    assert np.allclose(avg, phase_twirl(rho, n).matrix, atol=1e-12)


@pytest.mark.parametrize("m", [1, 4, 7])
def test_ensemble_twirl_identity(m):
    rho = random_density(4, seed=m)
    n = number_operator(4)
    assert ensemble_twirl_identity_check(phase_shift_ensemble(rho, n, uniform_phase_grid(m)), n, rho) <= 1e-10
    prior = Distribution(np.random.default_rng(m).dirichlet(np.ones(m)))
    e = phase_shift_ensemble(rho, n, uniform_phase_grid(m), prior)
    assert ensemble_twirl_identity_check(e, n, rho) <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 5])
def test_noon_asymmetry(n):
    rho, dims = noon(n)
    assert g_asymmetry_u1(rho, mode_number(dims, 0)) == pytest.approx(1.0, abs=1e-9)
    # an eigenstate of the total number has no asymmetry under the common phase
    assert g_asymmetry_u1(rho, total_number(dims)) == pytest.approx(0.0, abs=1e-9)


def test_number_eigenstate_and_single_mode_slack():
    assert g_asymmetry_u1(DensityOperator.diagonal([0, 1, 0]), number_operator(3)) == 0.0
    rho = random_density(5, seed=8)
    n = number_operator(5)
    assert asymmetry_number_entropy_bound_check(rho, n) == pytest.approx(von_neumann_entropy(rho), abs=1e-9)
    assert asymmetry_number_entropy_bound_check(random_pure(5, seed=9), n) == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(a=st.integers(1, 4), b=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_asymmetry_below_number_entropy(a, b, seed):
    rho = random_density(a * b, seed=seed)
    assert asymmetry_number_entropy_bound_check(rho, total_number([a, b])) >= -1e-9
    assert g_asymmetry_u1(rho, total_number([a, b])) >= -1e-12


def test_so3_twirl_examples():
    half = SpinDecomposition.single(1)
    rho = random_density(2, seed=1)
    assert frobenius_distance(so3_twirl(rho, half), DensityOperator.maximally_mixed(2)) < 1e-12
    s = SpinDecomposition.from_spins([1, 1])
    proj = s.projectors[0]
    psi = proj @ np.random.default_rng(2).standard_normal(4)
    twirled = so3_twirl(DensityOperator.from_ket(psi), s)
    assert np.allclose(twirled.matrix, proj / 3, atol=1e-12)


@pytest.mark.parametrize("two_j", range(1, 9))
def test_pure_spin_asymmetry(two_j):
    s = SpinDecomposition.single(two_j)
    rho = random_pure(two_j + 1, seed=two_j)
    assert g_asymmetry_so3(rho, s) == pytest.approx(math.log2(two_j + 1), abs=1e-9)
    assert g_asymmetry_so3(DensityOperator.maximally_mixed(two_j + 1), s) == pytest.approx(0.0, abs=1e-9)


def test_one_sided_singlet_against_pauli_twirl():
    singlet = DensityOperator.from_ket([0, 1, -1, 0])
    s = SpinDecomposition(((1, 2),))
    # Pauli averaging is a unitary 1-design, hence equal to the Haar twirl on one qubit
    pauli = sum(np.kron(p, np.eye(2)) @ singlet.matrix @ np.kron(p, np.eye(2)).conj().T for p in PAULIS) / 4
    assert np.allclose(so3_twirl(singlet, s).matrix, pauli, atol=1e-12)
    assert g_asymmetry_so3(singlet, s) == pytest.approx(2.0, abs=1e-9)
    assert g_asymmetry_so3(singlet, SpinDecomposition.from_spins([1, 1])) == pytest.approx(0.0, abs=1e-9)


def test_closed_form_matches_twirl_and_rejects_multiplicity():
    s = SpinDecomposition(((2, 1), (0, 1)))
    rho = random_density(4, seed=5)
    assert g_asymmetry_so3_closed_form(rho, s) == pytest.approx(g_asymmetry_so3(rho, s), abs=1e-9)
    with pytest.raises(StateError):
        g_asymmetry_so3_closed_form(random_density(8, seed=1), SpinDecomposition.from_spins([1, 1, 1]))


def test_grid_quadrature_cross_check():
    s = SpinDecomposition.from_spins([1, 2])
    rho = random_density(s.dim, seed=6)
    err = frobenius_distance(so3_grid_twirl(rho, s, EulerGrid.cubic(8)), so3_twirl(rho, s))
    assert err < 5e-3


def test_jmax_saturation_example():
    s = SpinDecomposition(((2, 1), (0, 1)))
    psi = np.zeros(4, dtype=complex)
    psi[0], psi[3] = math.sqrt(3 / 4), math.sqrt(1 / 4)
    rho = DensityOperator.from_ket(psi)
    assert jmax_asymmetry_bound(rho, s, 2) == pytest.approx(0.0, abs=1e-9)
    assert g_asymmetry_so3(rho, s) == pytest.approx(2.0, abs=1e-9)
    assert jmax_saturated(rho, s, 2)


def test_jmax_single_block_slack():
    s = SpinDecomposition.single(4)
    slack = jmax_asymmetry_bound(random_pure(5, seed=3), s, 4)
    assert slack == pytest.approx(2 * math.log2(3) - math.log2(5), abs=1e-9)


def test_jmax_rejections():
    s = SpinDecomposition(((2, 1), (1, 1)))
    psi = np.ones(5) / math.sqrt(5)
    with pytest.raises(StateError):
        jmax_asymmetry_bound(DensityOperator.from_ket(psi), s, 2)
    with pytest.raises(StateError):
        jmax_asymmetry_bound(DensityOperator.diagonal([1, 0, 0]), SpinDecomposition.single(2), 0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_jmax_bound_random(seed):
    s = SpinDecomposition(((4, 1), (2, 1), (0, 1)))
    assert jmax_asymmetry_bound(random_density(s.dim, seed=seed), s, 4) >= -1e-9


def test_rotation_is_representation():
    s = SpinDecomposition.from_spins([1, 2])
    u = s.rotation(0.3, 1.2, -0.7)
    assert np.allclose(u @ u.conj().T, np.eye(s.dim), atol=1e-12)
    rho = random_density(s.dim, seed=4)
    # twirl is invariant under a further rotation
    assert frobenius_distance(so3_twirl(rho.conjugate(u), s), so3_twirl(rho, s)) < 1e-10


def test_decomposition_validation():
    with pytest.raises(StateError):
        SpinDecomposition(((1, 1), (1, 1)))
    with pytest.raises(StateError):
        SpinDecomposition(((1, 1),), np.eye(3))
