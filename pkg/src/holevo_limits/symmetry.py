"""Group twirls and G-asymmetry for U(1) phase shifts and SO(3) rotations.

The U(1) twirl is the pinching ``rho -> sum_n P_n rho P_n`` in the eigenspaces
of an integer-spectrum generator. The SO(3) twirl is evaluated block by block
in a total angular momentum basis, where Schur's lemma fixes the twirled state
to ``I_(2j+1)/(2j+1) (x) tr_spin[block]`` on each spin-j sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .holevo import SignalEnsemble, ensemble_state, shifted_ensemble
from .qstate import (
    EIG_FLOOR,
    DensityOperator,
    Distribution,
    StateError,
    as_density,
    shannon_entropy,
    von_neumann_entropy,
)
from .spin import EulerGrid, coupled_basis, spin_label, wigner_d

SPECTRUM_TOL = 1e-9


def _check_unitary(u: np.ndarray, what: str) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise StateError(f"{what} must be a square matrix")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
        raise StateError(f"{what} is not unitary")
    return u


@dataclass(frozen=True, eq=False)
class NumberObservable:
    """Integer-spectrum observable ``N = sum_k n_k |b_k><b_k|``.

    ``levels[k]`` is the eigenvalue of basis column ``k``; ``basis`` defaults
    to the computational basis.
    """

    levels: tuple[int, ...]
    basis: np.ndarray | None = None
    _order: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        levels = tuple(int(x) for x in self.levels)
        if not levels:
            raise StateError("observable needs at least one level")
        if any(float(a) != float(b) for a, b in zip(levels, self.levels)):
            raise StateError("number observable levels must be integers")
        d = len(levels)
        basis = np.eye(d, dtype=complex) if self.basis is None else _check_unitary(self.basis, "basis")
        if basis.shape[0] != d:
            raise StateError(f"basis has dimension {basis.shape[0]} for {d} levels")
        basis.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_order", np.asarray(levels))

    @classmethod
    def from_diagonal(cls, values: Sequence[int]) -> "NumberObservable":
        return cls(tuple(values))

    @classmethod
    def from_operator(cls, op: np.ndarray, tol: float = SPECTRUM_TOL) -> "NumberObservable":
        """Diagonalize a Hermitian operator whose spectrum must be integer."""
        op = np.asarray(op, dtype=complex)
        if np.max(np.abs(op - op.conj().T)) > 1e-10:
            raise StateError("generator must be Hermitian")
        w, v = np.linalg.eigh(op)
        r = np.rint(w)
        if np.max(np.abs(w - r)) > tol:
            raise StateError(f"generator spectrum is not integer (max deviation {np.max(np.abs(w - r)):.3e})")
        return cls(tuple(int(x) for x in r), v)

    @classmethod
    def from_projectors(cls, values: Sequence[int], projectors: Sequence[np.ndarray]) -> "NumberObservable":
        cols, levels = [], []
        for n, p in zip(values, projectors):
            p = np.asarray(p, dtype=complex)
            w, v = np.linalg.eigh(p)
            keep = w > 0.5
            if np.max(np.abs(w[~keep])) > 1e-10 or np.max(np.abs(w[keep] - 1)) > 1e-10:
                raise StateError("projector eigenvalues must be 0 or 1")
            cols.append(v[:, keep])
            levels += [int(n)] * int(keep.sum())
        return cls(tuple(levels), np.column_stack(cols))

    @property
    def dim(self) -> int:
        return len(self.levels)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.unique(self._order)

    @property
    def degeneracies(self) -> np.ndarray:
        return np.array([np.count_nonzero(self._order == n) for n in self.eigenvalues])

    @property
    def projectors(self) -> list[np.ndarray]:
        out = []
        for n in self.eigenvalues:
            b = self.basis[:, self._order == n]
            out.append(b @ b.conj().T)
        return out

    @property
    def operator(self) -> np.ndarray:
        return (self.basis * self._order) @ self.basis.conj().T

    def in_eigenbasis(self, rho) -> np.ndarray:
        return self.basis.conj().T @ as_density(rho).matrix @ self.basis


def number_operator(d: int) -> NumberObservable:
    """Single-mode number operator truncated to ``n = 0..d-1``."""
    return NumberObservable(tuple(range(d)))


def mode_number(dims: Sequence[int], k: int) -> NumberObservable:
    """Number operator of mode ``k`` on a product of truncated modes."""
    grids = np.meshgrid(*[np.arange(d) for d in dims], indexing="ij")
    return NumberObservable(tuple(int(x) for x in grids[k].ravel()))


def total_number(dims: Sequence[int]) -> NumberObservable:
    grids = np.meshgrid(*[np.arange(d) for d in dims], indexing="ij")
    return NumberObservable(tuple(int(x) for x in sum(grids).ravel()))


def _require_dims(rho: DensityOperator, dim: int):
    if rho.dim != dim:
        raise StateError(f"dimension mismatch: state {rho.dim}, generator {dim}")


def phase_shift(n: NumberObservable, theta: float) -> np.ndarray:
    """Unitary ``exp(-i N theta)``."""
    return (n.basis * np.exp(-1j * theta * n._order)) @ n.basis.conj().T


def phase_twirl(rho, n: NumberObservable) -> DensityOperator:
    """Phase-randomized state ``sum_n P_n rho P_n``."""
    rho = as_density(rho)
    _require_dims(rho, n.dim)
    r = n.in_eigenbasis(rho)
    r = np.where(n._order[:, None] == n._order[None, :], r, 0.0)
    return DensityOperator(n.basis @ r @ n.basis.conj().T)


def number_distribution(rho, n: NumberObservable) -> Distribution:
    """Distribution ``p_n = tr[P_n rho]`` labelled by the eigenvalues."""
    rho = as_density(rho)
    _require_dims(rho, n.dim)
    diag = np.clip(np.einsum("ij,ji->i", n.basis.conj().T, rho.matrix @ n.basis).real, 0.0, None)
    ev = n.eigenvalues
    p = np.array([diag[n._order == v].sum() for v in ev])
    return Distribution(p / p.sum(), labels=tuple(int(v) for v in ev))


def g_asymmetry_u1(rho, n: NumberObservable) -> float:
    """Entropy increase under phase randomization."""
    rho = as_density(rho)
    return von_neumann_entropy(phase_twirl(rho, n)) - von_neumann_entropy(rho)


def asymmetry_number_entropy_bound_check(rho, n: NumberObservable) -> float:
    """Slack ``H(N) - A(rho)``, nonnegative for every state."""
    rho = as_density(rho)
    return shannon_entropy(number_distribution(rho, n)) - g_asymmetry_u1(rho, n)


def phase_shift_ensemble(rho, n: NumberObservable, thetas: Sequence[float], prior=None) -> SignalEnsemble:
    return shifted_ensemble(rho, [phase_shift(n, t) for t in thetas], prior)


def uniform_phase_grid(m: int) -> np.ndarray:
    return 2 * np.pi * np.arange(m) / m


def ensemble_twirl_identity_check(e: SignalEnsemble, n: NumberObservable, rho) -> float:
    """Frobenius residual between the twirl of the ensemble state and of ``rho``.

    For an ensemble of phase-shifted copies of ``rho`` the two twirls agree
    for any prior, because each shift commutes with the twirl.
    """
    a = phase_twirl(ensemble_state(e), n).matrix
    b = phase_twirl(rho, n).matrix
    return float(np.linalg.norm(a - b))


@dataclass(frozen=True, eq=False)
class SpinDecomposition:
    """Hilbert space split into total angular momentum sectors.

    ``blocks`` lists ``(two_j, multiplicity)`` pairs with distinct ``two_j``.
    Coordinates are taken in the coupled basis given by the columns of
    ``basis`` (identity by default). Within each block, the local index is
    ``m_index * multiplicity + copy`` with ``m = j, j-1, ..., -j``.
    """

    blocks: tuple[tuple[int, int], ...]
    basis: np.ndarray | None = None
    offsets: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        blocks = tuple((int(t), int(m)) for t, m in self.blocks)
        if not blocks:
            raise StateError("decomposition needs at least one block")
        if any(t < 0 or m < 1 for t, m in blocks):
            raise StateError("blocks need 2j >= 0 and multiplicity >= 1")
        if len({t for t, _ in blocks}) != len(blocks):
            raise StateError("each total spin may appear in one block only; merge multiplicities")
        offsets, pos = [], 0
        for t, m in blocks:
            offsets.append(pos)
            pos += (t + 1) * m
        basis = np.eye(pos, dtype=complex) if self.basis is None else _check_unitary(self.basis, "basis")
        if basis.shape[0] != pos:
            raise StateError(f"basis has dimension {basis.shape[0]}, blocks need {pos}")
        basis.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "offsets", tuple(offsets))

    @classmethod
    def single(cls, two_j: int) -> "SpinDecomposition":
        return cls(((two_j, 1),))

    @classmethod
    def from_spins(cls, two_js: Sequence[int]) -> "SpinDecomposition":
        """Decomposition of a tensor product of spins, acting in the product basis."""
        blocks, u = coupled_basis(two_js)
        return cls(tuple(blocks), u)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_multiplicity_free(self) -> bool:
        return all(m == 1 for _, m in self.blocks)

    def spins(self) -> list[Fraction]:
        return [Fraction(t, 2) for t, _ in self.blocks]

    def block_slice(self, k: int) -> slice:
        t, m = self.blocks[k]
        return slice(self.offsets[k], self.offsets[k] + (t + 1) * m)

    @property
    def projectors(self) -> list[np.ndarray]:
        out = []
        for k in range(len(self.blocks)):
            b = self.basis[:, self.block_slice(k)]
            out.append(b @ b.conj().T)
        return out

    def rotation(self, alpha: float, beta: float, gamma: float) -> np.ndarray:
        """Unitary representing the z-y-z rotation on the full space."""
        d = np.zeros((self.dim, self.dim), dtype=complex)
        for k, (t, m) in enumerate(self.blocks):
            s = self.block_slice(k)
            d[s, s] = np.kron(wigner_d(t, alpha, beta, gamma), np.eye(m))
        return self.basis @ d @ self.basis.conj().T

    def in_coupled_basis(self, rho) -> np.ndarray:
        return self.basis.conj().T @ as_density(rho).matrix @ self.basis

    def describe(self) -> str:
        return " + ".join(f"{m}x(j={spin_label(t)})" for t, m in self.blocks)


def spin_distribution(rho, s: SpinDecomposition) -> Distribution:
    """Distribution ``p_j = tr[P_j rho]`` over the blocks."""
    rho = as_density(rho)
    _require_dims(rho, s.dim)
    r = s.in_coupled_basis(rho)
    p = np.array([max(np.trace(r[s.block_slice(k), s.block_slice(k)]).real, 0.0) for k in range(len(s.blocks))])
    return Distribution(p / p.sum(), labels=tuple(spin_label(t) for t, _ in s.blocks))


def so3_twirl(rho, s: SpinDecomposition) -> DensityOperator:
    """Haar average of ``U_g rho U_g^dagger`` over SO(3) (or SU(2)).

    Off-diagonal blocks vanish and each spin-j block becomes
    ``I/(2j+1) (x) tr_spin[block]``, which handles multiplicities.
    """
    rho = as_density(rho)
    _require_dims(rho, s.dim)
    r = s.in_coupled_basis(rho)
    out = np.zeros_like(r)
    for k, (t, m) in enumerate(s.blocks):
        sl = s.block_slice(k)
        blk = r[sl, sl].reshape(t + 1, m, t + 1, m)
        sigma = np.einsum("aiaj->ij", blk)
        out[sl, sl] = np.kron(np.eye(t + 1) / (t + 1), sigma)
    return DensityOperator(s.basis @ out @ s.basis.conj().T)


def g_asymmetry_so3(rho, s: SpinDecomposition) -> float:
    """Entropy increase under the rotation twirl, from the exact twirled state."""
    rho = as_density(rho)
    return von_neumann_entropy(so3_twirl(rho, s)) - von_neumann_entropy(rho)


def g_asymmetry_so3_closed_form(rho, s: SpinDecomposition) -> float:
    """``H(J^2) + sum_j p_j log2(2j+1) - S(rho)``, valid for multiplicity-free spaces."""
    if not s.is_multiplicity_free:
        raise StateError(
            f"closed form needs multiplicity-free blocks, got {s.describe()}; use g_asymmetry_so3"
        )
    rho = as_density(rho)
    pj = spin_distribution(rho, s)
    mean_log = float(sum(p * math.log2(t + 1) for p, (t, _) in zip(pj.probs, s.blocks)))
    return shannon_entropy(pj) + mean_log - von_neumann_entropy(rho)


def _support_blocks(rho, s: SpinDecomposition) -> list[int]:
    pj = spin_distribution(rho, s).probs
    return [t for p, (t, _) in zip(pj, s.blocks) if p > EIG_FLOOR]


def jmax_asymmetry_bound(rho, s: SpinDecomposition, two_jmax: int) -> float:
    """Slack ``2 log2(jmax+1) - S(rho) - A(rho)`` for states with ``j <= jmax``.

    The bound maximizes ``H(p_j) + sum_j p_j log2(2j+1)`` over a ladder of
    spins of one parity, so support mixing integer and half-integer spins
    is rejected along with support above ``jmax``. Multiplicities would let
    the twirl spread over copies, so they are rejected too.
    """
    if not s.is_multiplicity_free:
        raise StateError(f"jmax bound needs multiplicity-free blocks, got {s.describe()}")
    rho = as_density(rho)
    support = _support_blocks(rho, s)
    if max(support) > two_jmax:
        raise StateError(f"state has weight on j={spin_label(max(support))} > jmax={spin_label(two_jmax)}")
    if len({t % 2 for t in support}) > 1:
        raise StateError("state mixes integer and half-integer spins")
    bound = 2 * math.log2(two_jmax / 2 + 1)
    return bound - von_neumann_entropy(rho) - g_asymmetry_so3(rho, s)


def jmax_saturated(rho, s: SpinDecomposition, two_jmax: int, tol: float = 1e-9) -> bool:
    """Whether ``p_j`` is proportional to ``2j+1`` over ``j = 0, 1, ..., jmax``.

    Only an integer ladder starting at ``j = 0`` reaches the bound.
    """
    if two_jmax % 2:
        return False
    pj = spin_distribution(rho, s)
    weights = {t: p for p, (t, _) in zip(pj.probs, s.blocks)}
    norm = (two_jmax / 2 + 1) ** 2
    for t in range(0, two_jmax + 1, 2):
        if abs(weights.get(t, 0.0) - (t + 1) / norm) > tol:
            return False
    return True


def so3_grid_twirl(rho, s: SpinDecomposition, grid: EulerGrid) -> DensityOperator:
    """Haar-weighted quadrature of the rotation twirl on an Euler grid.

    Independent of the block algebra in :func:`so3_twirl` and only
    approximate; the discrepancy shrinks as the grid is refined.
    """
    rho = as_density(rho)
    acc = np.zeros((s.dim, s.dim), dtype=complex)
    for a, b, g, w in zip(*grid.angles(), grid.measures()):
        u = s.rotation(a, b, g)
        acc += w * (u @ rho.matrix @ u.conj().T)
    acc = 0.5 * (acc + acc.conj().T)
    return DensityOperator(acc / np.trace(acc).real)
