"""Holevo bounds, group asymmetry, entropic uncertainty relations and Heisenberg limits."""

from .holevo import (
    JointDistribution,
    SignalEnsemble,
    data_processing_check,
    ensemble_state,
    holevo_chi,
    joint_distribution,
    mutual_information,
    shifted_ensemble,
)
from .observables import (
    MubPair,
    almost_periodic_entropy,
    canonical_phase_povm,
    covariant_phase_povm,
    degenerate_eur_slack,
    eur_slack,
    gaussian_qp_state,
    mub_pair_dft,
    number_phase_slack,
    oscillator_energy_time_slack,
    qp_discretization,
)
from .povm import Povm, basis_povm, measure, projective_povm, random_povm, trivial_povm
from .qstate import (
    DensityOperator,
    Distribution,
    StateError,
    classical_relative_entropy,
    ensemble_volume,
    partial_trace,
    purify,
    quantum_relative_entropy,
    random_density,
    random_pure,
    random_unitary,
    shannon_entropy,
    von_neumann_entropy,
)
from .symmetry import (
    NumberObservable,
    SpinDecomposition,
    g_asymmetry_so3,
    g_asymmetry_u1,
    mode_number,
    number_distribution,
    number_operator,
    phase_twirl,
    so3_twirl,
    spin_distribution,
    total_number,
)

__version__ = "0.1.0"
