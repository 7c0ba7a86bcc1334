"""Signal ensembles, Shannon mutual information and the Holevo quantity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .povm import Povm, outcome_probabilities
from .qstate import (
    DensityOperator,
    Distribution,
    StateError,
    as_density,
    classical_relative_entropy,
    quantum_relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)

MAX_JOINT_ENTRIES = 10**6


@dataclass(frozen=True, eq=False)
class SignalEnsemble:
    """Weighted set of signal states ``{rho_x; p(x)}``."""

    states: tuple[DensityOperator, ...]
    prior: Distribution

    def __post_init__(self):
        states = tuple(as_density(s) for s in self.states)
        if not states:
            raise StateError("ensemble needs at least one state")
        if len({s.dim for s in states}) != 1:
            raise StateError("ensemble states must share a dimension")
        prior = self.prior if isinstance(self.prior, Distribution) else Distribution(self.prior)
        if len(prior) != len(states):
            raise StateError(f"prior has {len(prior)} entries for {len(states)} states")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "prior", prior)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    @classmethod
    def uniform(cls, states: Sequence) -> "SignalEnsemble":
        return cls(tuple(states), Distribution.uniform(len(states)))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Dense joint distribution ``p(a, x)`` with outcomes on rows, signals on columns."""

    matrix: np.ndarray

    def __post_init__(self):
        p = np.array(self.matrix, dtype=float)
        if p.ndim != 2:
            raise StateError("joint distribution must be a matrix")
        if p.size > MAX_JOINT_ENTRIES:
            raise StateError(f"joint distribution has {p.size} entries, cap is {MAX_JOINT_ENTRIES}")
        if p.min() < -1e-12:
            raise StateError("negative joint probability")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > 1e-10:
            raise StateError(f"joint distribution sums to {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "matrix", p)

    def outcome_marginal(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def signal_marginal(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def mutual_information(self) -> float:
        p = self.matrix
        pa = p.sum(axis=1, keepdims=True)
        px = p.sum(axis=0, keepdims=True)
        live = p > 0
        ratio = p[live] / (pa @ px)[live]
        return max(float(np.sum(p[live] * np.log2(ratio))), 0.0)


def ensemble_state(e: SignalEnsemble) -> DensityOperator:
    """Ensemble density operator ``sum_x p(x) rho_x``."""
    m = np.zeros((e.dim, e.dim), dtype=complex)
    for p, s in zip(e.prior.probs, e.states):
        m += p * s.matrix
    return DensityOperator(m / np.trace(m).real)


def holevo_chi(e: SignalEnsemble) -> float:
    avg = sum(p * von_neumann_entropy(s) for p, s in zip(e.prior.probs, e.states))
    return max(von_neumann_entropy(ensemble_state(e)) - avg, 0.0)


def _conditional_outcomes(e: SignalEnsemble, m: Povm) -> np.ndarray:
    if m.dim != e.dim:
        raise StateError(f"dimension mismatch: ensemble {e.dim}, POVM {m.dim}")
    cond = np.array([outcome_probabilities(s, m) for s in e.states])
    cond = np.clip(cond, 0.0, None)
    return cond / cond.sum(axis=1, keepdims=True)


def joint_distribution(e: SignalEnsemble, m: Povm) -> JointDistribution:
    cond = _conditional_outcomes(e, m)
    return JointDistribution((cond * e.prior.probs[:, None]).T)


def mutual_information(e: SignalEnsemble, m: Povm, form: str = "difference") -> float:
    """Shannon mutual information between the signal label and the outcome.

    ``form="difference"`` evaluates ``H(A|rho_E) - sum_x p(x) H(A|rho_x)``;
    ``form="relative"`` evaluates ``sum_x p(x) H(p_x || p_E)``. The two agree
    to rounding.
    """
    cond = _conditional_outcomes(e, m)
    px = e.prior.probs
    pe = px @ cond
    d_e = Distribution(pe / pe.sum())
    if form == "difference":
        avg = sum(w * shannon_entropy(Distribution(c)) for w, c in zip(px, cond) if w > 0)
        return max(shannon_entropy(d_e) - avg, 0.0)
    if form == "relative":
        return float(sum(w * classical_relative_entropy(Distribution(c), d_e) for w, c in zip(px, cond) if w > 0))
    raise ValueError(f"unknown form {form!r}")


def data_processing_check(r1, r2, m: Povm) -> float:
    """Slack ``S(r1||r2) - H(p1||p2)``; nonnegative by monotonicity.

    Returns ``math.inf`` when the quantum relative entropy is infinite.
    """
    s = quantum_relative_entropy(r1, r2)
    if math.isinf(s):
        return math.inf
    p1 = outcome_probabilities(r1, m)
    p2 = outcome_probabilities(r2, m)
    d1 = Distribution(np.clip(p1, 0, None) / np.clip(p1, 0, None).sum())
    d2 = Distribution(np.clip(p2, 0, None) / np.clip(p2, 0, None).sum())
    return s - classical_relative_entropy(d1, d2)


def shifted_ensemble(rho, unitaries: Sequence[np.ndarray], prior=None) -> SignalEnsemble:
    """Ensemble ``{U_k rho U_k^dagger; p_k}`` of displaced copies of ``rho``."""
    rho = as_density(rho)
    states = tuple(rho.conjugate(u) for u in unitaries)
    if prior is None:
        prior = Distribution.uniform(len(states))
    return SignalEnsemble(states, prior)
