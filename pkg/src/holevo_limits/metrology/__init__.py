"""Estimation simulators and Heisenberg-limit calculators."""

from .bounds import (
    UNIFORM_BALL_CONSTANT,
    MagneticFieldSpec,
    MultimodeBounds,
    field_bounds,
    integer_distribution,
    m_spin_scaling,
    mow_bound,
    mow_bound_check,
    multimode_bounds,
    rotation_bound_calculator,
    spin_j_uniform_ball_t_err,
)
from .phase import (
    ESTIMATORS,
    EstimationTask,
    conditional_outcomes,
    rms_bounds,
    rms_bounds_from_distribution,
    rms_heisenberg_check,
    simulate_phase_estimation,
    uniform_phase_prior,
    wrapped_gaussian_prior,
)
from .report import BoundLink, EstimationReport
from .rotation import (
    haar_prior,
    jz_generator,
    known_axis_rotation_estimation,
    raw_residual,
    simulate_rotation_estimation,
    so3_covariant_povm,
)
