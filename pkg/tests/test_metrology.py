import math

import numpy as np
import pytest

from holevo_limits.metrology import (
    EstimationTask,
    MagneticFieldSpec,
    UNIFORM_BALL_CONSTANT,
    haar_prior,
    integer_distribution,
    jz_generator,
    known_axis_rotation_estimation,
    m_spin_scaling,
    mow_bound_check,
    multimode_bounds,
    rms_bounds_from_distribution,
    rms_heisenberg_check,
    rotation_bound_calculator,
    simulate_phase_estimation,
    simulate_rotation_estimation,
    so3_covariant_povm,
    spin_j_uniform_ball_t_err,
    uniform_phase_prior,
    wrapped_gaussian_prior,
)
from holevo_limits.observables import canonical_phase_povm, covariant_phase_povm
from holevo_limits.qstate import DensityOperator, Distribution, StateError, random_density
from holevo_limits.spin import EulerGrid
from holevo_limits.symmetry import NumberObservable, SpinDecomposition

TWO_PI = 2 * math.pi


def _task(probe, d, k, m=None, estimator="maximum-posterior", prior=None):
    n = NumberObservable.from_diagonal(np.arange(d))
    return EstimationTask(
        probe, n, prior or uniform_phase_prior(k), canonical_phase_povm(d, m or k), estimator
    )


def test_number_eigenstate_learns_nothing():
    rep = simulate_phase_estimation(_task(DensityOperator.diagonal([0, 1, 0]), 3, 64))
    assert rep.mutual_info_outcome == pytest.approx(0.0, abs=1e-12)
    assert rep.extras["l_err"] == pytest.approx(rep.extras["l0"], rel=1e-9)
    assert rep.all_hold


@pytest.mark.parametrize("estimator", ["maximum-posterior", "posterior-mean-circular", "identity-of-outcome"])
def test_plus_state_chain_and_saturation(estimator):
    rep = simulate_phase_estimation(_task(DensityOperator.from_ket([1, 1]), 2, 256, estimator=estimator))
    assert rep.all_hold
    assert rep.h_prior == pytest.approx(math.log2(TWO_PI), abs=1e-12)
    if estimator == "identity-of-outcome":
        assert rep.extras["covariance_gap"] <= 2e-3


def test_noon_information_at_most_one_bit():
    n = NumberObservable.from_diagonal([5, 0])
    probe = DensityOperator.from_ket([1, 1])
    task = EstimationTask(probe, n, uniform_phase_prior(128), covariant_phase_povm(n, 128))
    rep = simulate_phase_estimation(task)
    assert rep.mutual_info_outcome <= 1 + 1e-9
    assert rep.asymmetry == pytest.approx(1.0, abs=1e-12)
    assert rep.all_hold


def test_gaussian_prior_chain_holds():
    prior = wrapped_gaussian_prior(128, 0.5)
    rep = simulate_phase_estimation(_task(random_density(4, seed=3), 4, 128, prior=prior))
    assert rep.all_hold
    assert rep.h_prior < math.log2(TWO_PI)


def test_task_validation():
    with pytest.raises(StateError):
        _task(DensityOperator.maximally_mixed(3), 2, 16)
    with pytest.raises(StateError):
        _task(DensityOperator.maximally_mixed(2), 2, 16, estimator="median")


def test_rms_bounds():
    b = rms_bounds_from_distribution(integer_distribution([1.0], start=4))
    assert b["entropy_bound"] == pytest.approx(math.sqrt(TWO_PI / math.e), abs=1e-12)
    assert b["entropy_bound"] == pytest.approx(1.5203, abs=1e-4)
    rep = simulate_phase_estimation(_task(DensityOperator.from_ket([1, 1]), 2, 64, prior=wrapped_gaussian_prior(64, 0.4)))
    with pytest.raises(StateError):
        rms_heisenberg_check(rep, DensityOperator.from_ket([1, 1]), NumberObservable.from_diagonal([0, 1]))


def test_rms_check_on_uniform_prior():
    probe = DensityOperator.from_ket([1, 1, 1, 1])
    n = NumberObservable.from_diagonal(np.arange(4))
    rep = simulate_phase_estimation(_task(probe, 4, 512))
    out = rms_heisenberg_check(rep, probe, n)
    assert out["entropy_slack"] >= -out["grid_tolerance"]
    assert out["mean_slack"] >= -out["grid_tolerance"]


def test_mow_examples():
    assert mow_bound_check(integer_distribution([1.0])) == pytest.approx(0.2546, abs=1e-4)
    assert mow_bound_check(integer_distribution(np.ones(16))) == pytest.approx(0.254614, abs=1e-6)
    for p in (0.1, 0.5, 0.9):
        geo = integer_distribution(p * (1 - p) ** np.arange(400))
        assert mow_bound_check(geo) >= 0
    with pytest.raises(StateError):
        mow_bound_check(Distribution([0.5, 0.5], labels=(0.0, 0.5)))


def test_multimode_clt_matches_exact():
    b = multimode_bounds(mode_probs=[[0.5, 0.5]] * 64)
    assert b.central_limit_applicable
    assert abs(b.central_limit - b.exact) / b.exact <= 0.05
    assert b.correlated <= b.exact and b.product <= b.exact and b.mean_number <= b.exact


def test_multimode_from_state_detects_correlation():
    noon = np.zeros(9)
    noon[2] = noon[6] = 1  # |0,2> + |2,0> on two qutrits
    b = multimode_bounds(DensityOperator.from_ket(noon), [3, 3])
    assert not b.product_applicable
    assert b.correlated <= b.exact
    with pytest.raises(StateError):
        multimode_bounds(DensityOperator.from_ket(noon), [3, 2])


def test_field_bounds():
    assert UNIFORM_BALL_CONSTANT == pytest.approx(0.6756, abs=1e-4)
    assert spin_j_uniform_ball_t_err(1) == pytest.approx(0.5362, abs=1e-4)
    field = MagneticFieldSpec(2.0, 0.5)
    assert field.b_pi == pytest.approx(TWO_PI)
    with pytest.raises(StateError):
        MagneticFieldSpec(1.0, 1.0, prior_radius=7.0)
    s = SpinDecomposition.single(1)
    out = rotation_bound_calculator(s, DensityOperator.diagonal([1, 0]), MagneticFieldSpec(1.0, 1.0))
    assert out["t_err_over_b_pi"] == pytest.approx(spin_j_uniform_ball_t_err(1), abs=1e-12)


def test_m_spin_scaling_slopes_approach_limits():
    res = m_spin_scaling(40, [2**k for k in range(4, 12)])
    assert res["volume_slope"] == pytest.approx(-2.0, abs=0.05)
    assert res["t_err_slope"] == pytest.approx(-2 / 3, abs=0.05)


def test_so3_povm():
    grid = EulerGrid.cubic(8)
    p0 = so3_covariant_povm(0, grid)
    assert np.allclose(p0.elements.sum(axis=0), np.eye(1))
    for two_j in (1, 2):
        raw = so3_covariant_povm(two_j, grid)
        assert raw.residual < 0.05
        done = so3_covariant_povm(two_j, grid, complete=True)
        assert np.allclose(done.elements.sum(axis=0), np.eye(two_j + 1), atol=1e-12)
    with pytest.raises(StateError):
        so3_covariant_povm(5, grid)


def test_rotation_with_mixed_probe_learns_nothing():
    rep = simulate_rotation_estimation(1, EulerGrid.cubic(6), DensityOperator.maximally_mixed(2))
    assert rep.mutual_info_outcome == pytest.approx(0.0, abs=1e-12)
    assert rep.asymmetry == pytest.approx(0.0, abs=1e-12)


def test_rotation_chain_top_state():
    rep = simulate_rotation_estimation(2, EulerGrid.cubic(8), DensityOperator.diagonal([1, 0, 0]))
    assert rep.all_hold
    assert rep.mutual_info_outcome <= rep.asymmetry + 1e-9
    assert haar_prior(EulerGrid.cubic(4)).probs.sum() == pytest.approx(1.0)


def test_known_axis_matches_qubit_phase_estimation():
    k = 64
    plus_x = DensityOperator.from_ket([1, 1])
    povm = covariant_phase_povm(jz_generator(1), k)
    rot = known_axis_rotation_estimation(plus_x, 1, uniform_phase_prior(k), povm)
    ph = simulate_phase_estimation(
        EstimationTask(plus_x, NumberObservable.from_diagonal([1, 0]), uniform_phase_prior(k), povm)
    )
    assert rot.mutual_info_outcome == pytest.approx(ph.mutual_info_outcome, abs=1e-12)
    assert rot.rmse == pytest.approx(ph.rmse, abs=1e-12)


def test_spin1_m_eigenstate_learns_nothing():
    k = 32
    probe = DensityOperator.diagonal([0, 1, 0])
    rep = known_axis_rotation_estimation(probe, 2, uniform_phase_prior(k), covariant_phase_povm(jz_generator(2), k))
    assert rep.mutual_info_outcome == pytest.approx(0.0, abs=1e-12)
