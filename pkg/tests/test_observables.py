import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holevo_limits.observables import (
    MubPair,
    almost_periodic_convergence,
    almost_periodic_entropy,
    canonical_phase_povm,
    covariant_phase_povm,
    degenerate_eur_slack,
    energy_entropy,
    eur_slack,
    gaussian_qp_state,
    mub_pair_dft,
    number_phase_holevo_slack,
    number_phase_slack,
    oscillator_energy_time_slack,
    phase_length_ratio_check,
    qp_discretization,
)
from holevo_limits.povm import basis_povm, measure, outcome_probabilities
from holevo_limits.qstate import DensityOperator, StateError, random_density, random_pure, shannon_entropy
from holevo_limits.symmetry import NumberObservable

TWO_PI = 2 * math.pi


def test_measure_examples():
    rho = DensityOperator.diagonal([0, 1, 0])
    assert np.allclose(measure(rho, basis_povm(3)).probs, [0, 1, 0])
    p = outcome_probabilities(DensityOperator.maximally_mixed(4), canonical_phase_povm(4, 16))
    assert np.allclose(p, 1 / 16)


def test_phase_povm_on_plus_state():
    m = 64
    p = outcome_probabilities(DensityOperator.from_ket([1, 1]), canonical_phase_povm(2, m))
    th = TWO_PI * np.arange(m) / m
    assert np.allclose(p, (1 + np.cos(th)) / m, atol=1e-12)


def test_phase_povm_construction():
    assert canonical_phase_povm(2, 2).residual <= 1e-12
    with pytest.raises(StateError):
        canonical_phase_povm(16, 15)
    p = measure(DensityOperator.diagonal(np.eye(5)[3]), canonical_phase_povm(5, 40))
    assert shannon_entropy(p) == pytest.approx(math.log2(TWO_PI), abs=1e-12)


def test_phase_shift_moves_distribution_forward():
    from holevo_limits.symmetry import number_operator, phase_shift

    m = 32
    psi = random_pure(4, seed=2)
    povm = canonical_phase_povm(4, m)
    shifted = psi.conjugate(phase_shift(number_operator(4), TWO_PI * 3 / m))
    assert np.allclose(np.roll(outcome_probabilities(psi, povm), 3), outcome_probabilities(shifted, povm), atol=1e-12)


def test_mub_pair():
    pair = mub_pair_dft(2)
    assert np.allclose(np.abs(pair.basis_a.conj().T @ pair.basis_b) ** 2, 0.5)
    with pytest.raises(StateError):
        MubPair(np.eye(2), np.eye(2))


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_mub_equality_cases(d):
    pair = mub_pair_dft(d)
    pa, pb = pair.povm_a(), pair.povm_b()
    assert abs(eur_slack(DensityOperator.diagonal(np.eye(d)[0]), pa, pb, math.log2(d))) <= 1e-9
    assert abs(eur_slack(DensityOperator.maximally_mixed(d), pa, pb, math.log2(d))) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(d=st.integers(2, 10), seed=st.integers(0, 2**32 - 1))
def test_mub_relation_random(d, seed):
    pair = mub_pair_dft(d)
    assert eur_slack(random_density(d, seed=seed), pair.povm_a(), pair.povm_b(), math.log2(d)) >= -1e-9


def test_number_phase_dual_routes_agree():
    rho = random_density(6, seed=4)
    for m in (6, 24, 96):
        assert number_phase_slack(rho, m) == pytest.approx(number_phase_holevo_slack(rho, m), abs=1e-9)


def test_number_phase_slack_examples():
    rho = random_density(8, seed=0)
    assert number_phase_slack(rho, 128) >= -5e-3
    assert number_phase_slack(DensityOperator.diagonal(np.eye(8)[2]), 64) == pytest.approx(0.0, abs=1e-9)


def test_phase_length_ratio():
    lphi, vratio = phase_length_ratio_check(random_density(5, seed=1), 80)
    assert lphi >= vratio - 1e-12


def test_qp_gaussian_reaches_e_pi():
    d, length = 101, math.sqrt(TWO_PI)
    q, p = qp_discretization(d, length)
    h = eur_slack(gaussian_qp_state(d, length, math.sqrt(0.5)), q, p, 0.0)
    assert abs(h - math.log2(math.e * math.pi)) / math.log2(math.e * math.pi) <= 0.01
    with pytest.raises(StateError):
        qp_discretization(8, 1.0)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), length=st.floats(0.5, 6.0))
def test_qp_relation_random(seed, length):
    q, p = qp_discretization(9, length)
    assert eur_slack(random_density(9, seed=seed), q, p, math.log2(TWO_PI)) >= -1e-9


def test_degenerate_relation():
    d, aux = 4, 3
    gen = NumberObservable.from_diagonal(np.repeat(np.arange(d), aux))
    phase = covariant_phase_povm(gen, 32)
    # a product with a fixed auxiliary state reduces to the single-mode slack
    mode = random_density(d, seed=1)
    anc = random_density(aux, seed=2)
    assert degenerate_eur_slack(mode.tensor(anc), gen, phase) == pytest.approx(number_phase_slack(mode, 32), abs=1e-9)
    for seed in range(20):
        assert degenerate_eur_slack(random_density(d * aux, seed=seed), gen, phase) >= -1e-9


def test_oscillator_slack_is_frequency_independent():
    rho = random_density(6, seed=3)
    a = oscillator_energy_time_slack(rho, 0.7, 48)
    b = oscillator_energy_time_slack(rho, 3.1, 48)
    assert a == pytest.approx(b, abs=1e-12)
    assert a == pytest.approx(number_phase_slack(rho, 48), abs=1e-12)


def test_almost_periodic_single_level_and_periodic_case():
    assert almost_periodic_entropy([1.0], [0.0], 10.0) == 0.0
    psi = random_pure(2, seed=4).matrix
    h_ap = almost_periodic_entropy(psi, [0.0, 1.0], 1000 * TWO_PI)
    m = 4096
    p = outcome_probabilities(psi, canonical_phase_povm(2, m))
    h_t = -np.sum(p[p > 0] * np.log2(p[p > 0])) + math.log2(TWO_PI / m)
    assert h_ap == pytest.approx(h_t - math.log2(TWO_PI), abs=1e-3)


def test_almost_periodic_incommensurate_relation():
    e = [0.0, 1.0, math.sqrt(2)]
    for seed in range(5):
        rho = random_pure(3, seed=seed).matrix
        assert energy_entropy(rho, 3) + almost_periodic_entropy(rho, e, 500.0) >= -1e-2
    rows = almost_periodic_convergence(random_pure(3, seed=9).matrix, e, [100.0, 400.0])
    assert math.isnan(rows[0][2]) and abs(rows[1][2]) < 0.1


def test_almost_periodic_validation():
    with pytest.raises(StateError):
        almost_periodic_entropy([1.0, 0.0], [0.0, 0.0], 1.0)
    with pytest.raises(StateError):
        almost_periodic_entropy([1.0, 1.0], [0.0, 1.0], 1.0)
