"""Measurement constructions and entropic uncertainty relation evaluators.

Phase kets follow ``<phi|n> = (2 pi)^(-1/2) exp(i n phi)``, so a phase shift
``exp(-i N theta)`` translates the phase distribution by ``+theta``. On an
M-point grid the canonical phase POVM is a DFT basis of an M-dimensional
space restricted to the first ``d`` levels, which makes every discretized
relation below exact rather than approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .holevo import holevo_chi, mutual_information
from .povm import Povm, basis_povm, measure, projective_povm
from .qstate import (
    DensityOperator,
    Distribution,
    StateError,
    as_density,
    shannon_entropy,
    von_neumann_entropy,
)
from .symmetry import NumberObservable, number_distribution, number_operator, phase_shift_ensemble, uniform_phase_grid

__all__ = [
    "Povm",
    "measure",
    "MubPair",
    "canonical_phase_povm",
    "covariant_phase_povm",
    "mub_pair_dft",
    "eur_slack",
    "number_phase_slack",
    "number_phase_holevo_slack",
    "phase_length_ratio_check",
    "qp_discretization",
    "gaussian_qp_state",
    "degenerate_eur_slack",
    "oscillator_energy_time_slack",
    "almost_periodic_entropy",
    "almost_periodic_convergence",
    "default_phase_outcomes",
    "energy_entropy",
]

TWO_PI = 2 * math.pi


def default_phase_outcomes(d: int) -> int:
    return 16 * d


@dataclass(frozen=True, eq=False)
class MubPair:
    """Two orthonormal bases (as matrix columns) with all overlaps ``1/d``."""

    basis_a: np.ndarray
    basis_b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.basis_a, dtype=complex)
        b = np.asarray(self.basis_b, dtype=complex)
        d = a.shape[0]
        if a.shape != (d, d) or b.shape != (d, d):
            raise StateError("bases must be square matrices of equal size")
        for name, m in (("basis_a", a), ("basis_b", b)):
            if np.max(np.abs(m.conj().T @ m - np.eye(d))) > 1e-10:
                raise StateError(f"{name} is not orthonormal")
        ov = np.abs(a.conj().T @ b) ** 2
        if np.max(np.abs(ov - 1.0 / d)) > 1e-10:
            raise StateError("bases are not mutually unbiased")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "basis_a", a)
        object.__setattr__(self, "basis_b", b)

    @property
    def dim(self) -> int:
        return self.basis_a.shape[0]

    def povm_a(self) -> Povm:
        return projective_povm(self.basis_a, labels=tuple(range(self.dim)))

    def povm_b(self) -> Povm:
        return projective_povm(self.basis_b, labels=tuple(range(self.dim)))

    def b_operator(self) -> np.ndarray:
        return (self.basis_b * np.arange(self.dim)) @ self.basis_b.conj().T

    def translation(self, j: int) -> np.ndarray:
        """``exp(-2 pi i j B / d)``, which maps ``|a>`` to ``|a + j mod d>``."""
        ph = np.exp(-2j * np.pi * j * np.arange(self.dim) / self.dim)
        return (self.basis_b * ph) @ self.basis_b.conj().T


def mub_pair_dft(d: int) -> MubPair:
    """Computational basis and its DFT, with ``<b|a> = d^(-1/2) exp(-2 pi i a b / d)``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    k = np.arange(d)
    f = np.exp(2j * np.pi * np.outer(k, k) / d) / math.sqrt(d)
    return MubPair(np.eye(d, dtype=complex), f)


def canonical_phase_povm(d: int, m: int | None = None) -> Povm:
    """Canonical phase measurement on levels ``0..d-1`` with ``m`` grid outcomes.

    ``E_k = (1/m) sum_{n,n'} exp(-i (n - n') theta_k) |n><n'|`` with
    ``theta_k = 2 pi k / m``; complete exactly when ``m >= d``.
    """
    m = default_phase_outcomes(d) if m is None else m
    if m < d:
        raise StateError(f"phase grid needs M >= d, got M={m} < d={d}")
    return covariant_phase_povm(number_operator(d), m)


def covariant_phase_povm(n: NumberObservable, m: int | None = None) -> Povm:
    """Covariant phase POVM for a possibly degenerate integer generator.

    Eigenvectors sharing a level are matched by their order of appearance,
    so for ``N (x) I_aux`` this is the canonical phase POVM tensored with
    the identity on the auxiliary factor.
    """
    levels = np.asarray(n.levels)
    span = int(levels.max() - levels.min())
    m = default_phase_outcomes(span + 1) if m is None else m
    if m < span + 1:
        raise StateError(f"phase grid needs M > max level gap, got M={m} for gap {span}")
    copy = np.zeros(levels.size, dtype=int)
    seen: dict[int, int] = {}
    for i, v in enumerate(levels):
        copy[i] = seen.get(int(v), 0)
        seen[int(v)] = copy[i] + 1
    same = copy[:, None] == copy[None, :]
    thetas = uniform_phase_grid(m)
    diff = levels[:, None] - levels[None, :]
    local = np.exp(-1j * thetas[:, None, None] * diff[None]) * same[None] / m
    elems = n.basis[None] @ local @ n.basis.conj().T[None]
    return Povm(elems, labels=tuple(thetas), cell_width=TWO_PI / m)


def eur_slack(rho, povm_a: Povm, povm_b: Povm, log2c: float) -> float:
    """``H(A) + H(B) - S(rho) - log2 C``; differential where cell widths are set."""
    rho = as_density(rho)
    return (
        shannon_entropy(measure(rho, povm_a))
        + shannon_entropy(measure(rho, povm_b))
        - von_neumann_entropy(rho)
        - log2c
    )


def number_phase_slack(rho, m: int | None = None) -> float:
    """Number-phase relation slack with phase entropy on an ``m``-cell grid."""
    rho = as_density(rho)
    return eur_slack(rho, basis_povm(rho.dim), canonical_phase_povm(rho.dim, m), math.log2(TWO_PI))


def number_phase_holevo_slack(rho, m: int | None = None) -> float:
    """``chi - I`` for the uniform m-point phase-shifted ensemble.

    Equals :func:`number_phase_slack` identically; computed through the
    ensemble and POVM rather than entropies of ``rho``.
    """
    rho = as_density(rho)
    povm = canonical_phase_povm(rho.dim, m)
    e = phase_shift_ensemble(rho, number_operator(rho.dim), uniform_phase_grid(len(povm)))
    return holevo_chi(e) - mutual_information(e, povm)


def phase_length_ratio_check(rho, m: int | None = None) -> tuple[float, float]:
    """Return ``(L_phi / 2pi, V(rho) / V_N)``; the first is never smaller."""
    rho = as_density(rho)
    l_phi = 2.0 ** shannon_entropy(measure(rho, canonical_phase_povm(rho.dim, m)))
    v_n = 2.0 ** shannon_entropy(number_distribution(rho, number_operator(rho.dim)))
    return l_phi / TWO_PI, 2.0 ** von_neumann_entropy(rho) / v_n


def qp_discretization(d: int, length: float, hbar: float = 1.0) -> tuple[Povm, Povm]:
    """Discretized position and momentum on ``d = 2r + 1`` levels.

    ``q_m = m L / sqrt(d)`` and ``p_n = n 2 pi hbar / (L sqrt(d))`` for
    ``m, n = -r..r``; the momentum basis is
    ``|phi_n> = d^(-1/2) sum_m exp(2 pi i m n / d) |psi_m>``.
    """
    if d < 1 or d % 2 == 0:
        raise StateError(f"position/momentum discretization needs odd d, got {d}")
    if not length > 0 or not hbar > 0:
        raise StateError("length and hbar must be positive")
    r = (d - 1) // 2
    idx = np.arange(-r, r + 1)
    dq = length / math.sqrt(d)
    dp = TWO_PI * hbar / (length * math.sqrt(d))
    phi = np.exp(2j * np.pi * np.outer(idx, idx) / d) / math.sqrt(d)
    q = projective_povm(np.eye(d), labels=tuple(idx * dq), cell_width=dq)
    p = projective_povm(phi, labels=tuple(idx * dp), cell_width=dp)
    return q, p


def gaussian_qp_state(d: int, length: float, sigma_q: float, hbar: float = 1.0, q0: float = 0.0) -> DensityOperator:
    """Pure discretized Gaussian wavepacket sampled at the position grid."""
    r = (d - 1) // 2
    q = np.arange(-r, r + 1) * length / math.sqrt(d)
    psi = np.exp(-((q - q0) ** 2) / (4 * sigma_q**2))
    return DensityOperator.from_ket(psi)


def degenerate_eur_slack(rho, n: NumberObservable, phase: Povm) -> float:
    """Slack of the number-phase relation with a degenerate number observable.

    ``H(N) + H(Phi) - log2 2pi - S(rho) + sum_n p_n S(P_n rho P_n / p_n)``.
    For ``N = N_mode (x) I_aux`` the conditional entropies are those of the
    auxiliary states ``rho_{a|n}``.
    """
    rho = as_density(rho)
    if n.dim != rho.dim or phase.dim != rho.dim:
        raise StateError("state, number observable and phase POVM must share a dimension")
    pn = number_distribution(rho, n)
    cond = 0.0
    for p, proj in zip(pn.probs, n.projectors):
        if p > 0:
            blk = proj @ rho.matrix @ proj / p
            cond += p * von_neumann_entropy(DensityOperator(blk / np.trace(blk).real))
    return (
        shannon_entropy(pn)
        + shannon_entropy(measure(rho, phase))
        - math.log2(TWO_PI)
        - von_neumann_entropy(rho)
        + cond
    )


def oscillator_energy_time_slack(rho, omega: float, m: int | None = None, hbar: float = 1.0) -> float:
    """``H(E) + H(T) - S(rho) - log2 tau`` for an oscillator of frequency ``omega``.

    Time is the phase divided by ``omega`` and has cell width ``2 pi / (omega m)``.
    """
    if not omega > 0:
        raise StateError("omega must be positive")
    rho = as_density(rho)
    d = rho.dim
    m = default_phase_outcomes(d) if m is None else m
    phase = canonical_phase_povm(d, m)
    p_t = Distribution(measure(rho, phase).probs, cell_width=TWO_PI / (omega * m))
    energies = hbar * omega * np.arange(d)
    p_e = Distribution(np.clip(np.diag(rho.matrix).real, 0, None), labels=tuple(energies))
    tau = TWO_PI / omega
    return shannon_entropy(p_e) + shannon_entropy(p_t) - von_neumann_entropy(rho) - math.log2(tau)


def _ap_state(state, n_levels: int) -> np.ndarray:
    s = np.asarray(state, dtype=complex)
    if s.ndim == 1:
        if s.size != n_levels:
            raise StateError("amplitude count does not match the number of energies")
        if abs(np.vdot(s, s).real - 1.0) > 1e-10:
            raise StateError(f"amplitudes are not normalized (sum |c|^2 = {np.vdot(s, s).real!r})")
        return np.outer(s, s.conj())
    rho = as_density(s)
    if rho.dim != n_levels:
        raise StateError("state dimension does not match the number of energies")
    return rho.matrix


def almost_periodic_entropy(
    state,
    energies: Sequence[float],
    window: float,
    samples_per_period: int = 64,
    hbar: float = 1.0,
) -> float:
    """Time-averaged entropy of the canonical time density over ``[-x, x)``.

    ``state`` is either an amplitude vector in the energy basis or a density
    matrix. The density ``p_ap(t) = sum rho_{nn'} exp(i (e_n - e_n') t / hbar)``
    is sampled uniformly and normalized to unit mean on the window.
    """
    e = np.asarray(energies, dtype=float)
    if len(np.unique(e)) != e.size:
        raise StateError("energies must be distinct")
    rho = _ap_state(state, e.size)
    if not window > 0:
        raise StateError("window must be positive")
    gap = float(e.max() - e.min()) / hbar
    if gap == 0:
        return 0.0
    n_pts = max(int(math.ceil(samples_per_period * 2 * window * gap / TWO_PI)), 2 * samples_per_period)
    t = np.linspace(-window, window, n_pts, endpoint=False)
    w, v = np.linalg.eigh(rho)
    p = np.zeros(n_pts)
    # mixed states as weighted sums of pure terms keep memory linear in the grid
    for lam, vec in zip(w, v.T):
        if lam > 1e-14:
            amp = np.exp(1j * np.outer(t, e) / hbar) @ vec
            p += lam * np.abs(amp) ** 2
    p = p / p.mean()
    live = p > 0
    return float(-np.sum(p[live] * np.log2(p[live])) / n_pts)


def almost_periodic_convergence(
    state, energies: Sequence[float], windows: Sequence[float], samples_per_period: int = 64, hbar: float = 1.0
) -> list[tuple[float, float, float]]:
    """Rows ``(window, H_ap, change from previous window)`` for a window sequence."""
    rows, prev = [], None
    for x in windows:
        h = almost_periodic_entropy(state, energies, x, samples_per_period, hbar)
        rows.append((float(x), h, math.nan if prev is None else h - prev))
        prev = h
    return rows


def energy_entropy(state, n_levels: int) -> float:
    rho = _ap_state(state, n_levels)
    p = np.clip(np.diag(rho).real, 0, None)
    return shannon_entropy(Distribution(p / p.sum()))

