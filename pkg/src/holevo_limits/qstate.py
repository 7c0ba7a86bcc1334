"""Density operators, probability distributions and their entropies.

All entropies are in bits. Eigenvalues below ``EIG_FLOOR`` are treated as
exact zeros, both when evaluating ``-x log x`` and when deciding supports for
relative entropies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

EIG_FLOOR = 1e-10
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
MAX_DIM = 4096


class StateError(ValueError):
    """Raised when an operator or distribution violates its invariants."""


def _entropy_terms(x: np.ndarray) -> float:
    x = x[x > 0]
    return float(-np.sum(x * np.log2(x)))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    The stored matrix is the exact Hermitian part of the input, after the
    input has been checked to be Hermitian within ``HERMITIAN_TOL``.
    """

    matrix: np.ndarray
    basis_labels: tuple[str, ...] | None = None
    _spectrum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise StateError(f"density matrix must be square, got shape {m.shape}")
        if m.shape[0] > MAX_DIM:
            raise StateError(f"dimension {m.shape[0]} exceeds the dense cap {MAX_DIM}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITIAN_TOL:
            raise StateError(f"matrix is not Hermitian (max deviation {herm:.3e})")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"trace is {tr!r}, expected 1")
        evals = np.linalg.eigvalsh(m)
        if evals[0] < -EIG_FLOOR:
            raise StateError(f"matrix is not positive semidefinite (min eigenvalue {evals[0]:.3e})")
        if self.basis_labels is not None and len(self.basis_labels) != m.shape[0]:
            raise StateError("basis_labels length does not match the dimension")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        clipped = np.where(evals < EIG_FLOOR, 0.0, evals)
        clipped.setflags(write=False)
        object.__setattr__(self, "_spectrum", clipped)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues in ascending order with sub-floor values set to zero."""
        return self._spectrum

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self._spectrum))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(float(np.real(np.trace(self.matrix @ self.matrix))) - 1.0) <= tol

    def conjugate(self, unitary: np.ndarray) -> "DensityOperator":
        """Return ``U rho U^dagger``."""
        u = np.asarray(unitary)
        return DensityOperator(u @ self.matrix @ u.conj().T)

    def tensor(self, other: "DensityOperator") -> "DensityOperator":
        return DensityOperator(np.kron(self.matrix, other.matrix))

    def __repr__(self):
        return f"DensityOperator(dim={self.dim}, rank={self.rank})"

    @classmethod
    def from_ket(cls, psi: Sequence[complex], normalize: bool = True) -> "DensityOperator":
        v = np.asarray(psi, dtype=complex).ravel()
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def diagonal(cls, probs: Sequence[float]) -> "DensityOperator":
        return cls(np.diag(np.asarray(probs, dtype=complex)))


def as_density(rho) -> DensityOperator:
    if isinstance(rho, DensityOperator):
        return rho
    return DensityOperator(np.asarray(rho))


@dataclass(frozen=True, eq=False)
class Distribution:
    """Finite probability distribution with optional outcome cell width.

    When ``cell_width`` is set, each outcome stands for a cell of that
    measure and :func:`shannon_entropy` returns the differential entropy of
    the corresponding piecewise-constant density.
    """

    probs: np.ndarray
    labels: tuple | None = None
    cell_width: float | None = None

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise StateError("empty distribution")
        if np.any(~np.isfinite(p)):
            raise StateError("distribution contains non-finite values")
        if p.min() < -NORM_TOL:
            raise StateError(f"negative probability {p.min():.3e}")
        p = np.clip(p, 0.0, None)
        total = p.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise StateError(f"probabilities sum to {total!r}, expected 1")
        if self.cell_width is not None and not self.cell_width > 0:
            raise StateError("cell_width must be positive")
        labels = self.labels
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != p.size:
                raise StateError("labels length does not match number of outcomes")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_weights(cls, weights, labels=None, cell_width=None) -> "Distribution":
        """Normalize nonnegative weights into a distribution."""
        w = np.asarray(weights, dtype=float).ravel()
        if w.min() < 0:
            raise StateError("weights must be nonnegative")
        return cls(w / w.sum(), labels=labels, cell_width=cell_width)

    @classmethod
    def uniform(cls, n: int, labels=None, cell_width=None) -> "Distribution":
        return cls(np.full(n, 1.0 / n), labels=labels, cell_width=cell_width)

    def __len__(self):
        return self.probs.size

    def values(self) -> np.ndarray:
        """Numeric outcome values (labels if numeric, else indices)."""
        if self.labels is None:
            return np.arange(self.probs.size, dtype=float)
        return np.asarray(self.labels, dtype=float)

    def mean(self) -> float:
        return float(np.dot(self.probs, self.values()))

    def variance(self) -> float:
        v = self.values()
        mu = np.dot(self.probs, v)
        return float(np.dot(self.probs, (v - mu) ** 2))


def shannon_entropy(d: Distribution) -> float:
    """Shannon entropy in bits, plus ``log2(cell_width)`` if a width is set."""
    h = _entropy_terms(d.probs)
    if d.cell_width is not None:
        h += math.log2(d.cell_width)
    return h


def von_neumann_entropy(rho) -> float:
    rho = as_density(rho)
    return _entropy_terms(rho.spectrum)


def quantum_relative_entropy(r1, r2) -> float:
    """``tr[r1 (log2 r1 - log2 r2)]``; ``math.inf`` if supp(r1) is not in supp(r2)."""
    r1, r2 = as_density(r1), as_density(r2)
    if r1.dim != r2.dim:
        raise StateError(f"dimension mismatch: {r1.dim} vs {r2.dim}")
    lam, u = np.linalg.eigh(r1.matrix)
    mu, v = np.linalg.eigh(r2.matrix)
    lam = np.where(lam < EIG_FLOOR, 0.0, lam)
    mu = np.where(mu < EIG_FLOOR, 0.0, mu)
    overlap = np.abs(u.conj().T @ v) ** 2  # overlap[i, j] = |<u_i|v_j>|^2
    weight_on_v = lam @ overlap  # <v_j| r1 |v_j>
    null = mu == 0.0
    if np.any(weight_on_v[null] > EIG_FLOOR):
        return math.inf
    cross = float(np.dot(weight_on_v[~null], np.log2(mu[~null])))
    value = -_entropy_terms(lam) - cross
    # rounding can push an exact zero slightly negative
    return 0.0 if -1e-12 < value < 0.0 else value


def classical_relative_entropy(d1: Distribution, d2: Distribution) -> float:
    """``sum p1 log2(p1/p2)``; ``math.inf`` when p1 puts weight where p2 has none."""
    p, q = d1.probs, d2.probs
    if p.size != q.size:
        raise StateError(f"outcome count mismatch: {p.size} vs {q.size}")
    live = p > 0
    if np.any(p[live & (q <= 0)] > 0):
        return math.inf
    return float(np.sum(p[live] * (np.log2(p[live]) - np.log2(q[live]))))


def ensemble_volume(entropy: float, K: float = 1.0) -> float:
    """Volume ``K 2^entropy`` occupied by an ensemble of the given entropy."""
    if not K > 0:
        raise ValueError("K must be positive")
    return K * 2.0 ** entropy


def partial_trace(rho, factor_dims: Sequence[int], traced_factor: int | Sequence[int]) -> DensityOperator:
    """Trace out one or more tensor factors of ``rho``."""
    rho = as_density(rho)
    dims = [int(x) for x in factor_dims]
    if any(x < 1 for x in dims) or int(np.prod(dims)) != rho.dim:
        raise StateError(f"factor dims {dims} do not multiply to {rho.dim}")
    traced = [traced_factor] if np.isscalar(traced_factor) else list(traced_factor)
    n = len(dims)
    if any(not 0 <= t < n for t in traced):
        raise StateError(f"traced factor out of range for {n} factors")
    keep = [i for i in range(n) if i not in traced]
    t = rho.matrix.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out_idx = keep + [i + n for i in keep]
    reduced = np.einsum(t, row + col, out_idx)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return DensityOperator(reduced.reshape(d_keep, d_keep))


def purify(rho) -> DensityOperator:
    """Pure state on ``H (x) H_aux`` whose marginal on ``H`` is ``rho``.

    Eigenvalues are taken in descending order, so a pure input maps to
    ``|psi><psi| (x) |0><0|``.
    """
    rho = as_density(rho)
    lam, u = np.linalg.eigh(rho.matrix)
    lam, u = lam[::-1], u[:, ::-1]
    lam = np.where(lam < EIG_FLOOR, 0.0, lam)
    d = rho.dim
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if lam[i] > 0:
            psi += math.sqrt(lam[i]) * np.kron(u[:, i], np.eye(d)[i])
    return DensityOperator.from_ket(psi)


def random_density(dim: int, rank: int | None = None, seed=None) -> DensityOperator:
    """Hilbert-Schmidt (Ginibre) random density operator of the given rank."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def random_pure(dim: int, seed=None) -> DensityOperator:
    return random_density(dim, 1, seed)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase correction."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def frobenius_distance(r1, r2) -> float:
    """Frobenius distance between two density operators."""
    return float(np.linalg.norm(as_density(r1).matrix - as_density(r2).matrix))
