"""Positive operator valued measures and the Born rule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qstate import Distribution, StateError, as_density

COMPLETENESS_TOL = 1e-10
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Povm:
    """Finite POVM stored as a stack of ``(n_outcomes, dim, dim)`` matrices.

    ``atol`` is the allowed Frobenius residual of ``sum(elements) - I``.
    Quadrature-built measurements (see the rotation module) carry a looser
    ``atol`` and report their actual residual in ``residual``.
    """

    elements: np.ndarray
    labels: tuple | None = None
    cell_width: float | None = None
    atol: float = COMPLETENESS_TOL
    residual: float = field(init=False)

    def __post_init__(self):
        e = np.array(self.elements, dtype=complex)
        if e.ndim != 3 or e.shape[1] != e.shape[2]:
            raise StateError(f"POVM elements must have shape (n, d, d), got {e.shape}")
        if np.max(np.abs(e - e.conj().transpose(0, 2, 1))) > 1e-10:
            raise StateError("POVM elements must be Hermitian")
        e = 0.5 * (e + e.conj().transpose(0, 2, 1))
        mins = np.linalg.eigvalsh(e)[:, 0]
        if mins.min() < -PSD_TOL:
            raise StateError(f"POVM element {int(mins.argmin())} is not PSD (min eigenvalue {mins.min():.3e})")
        d = e.shape[1]
        residual = float(np.linalg.norm(e.sum(axis=0) - np.eye(d)))
        if residual > self.atol:
            raise StateError(f"POVM completeness residual {residual:.3e} exceeds {self.atol:.1e}")
        if self.labels is not None and len(self.labels) != e.shape[0]:
            raise StateError("labels length does not match number of outcomes")
        if self.cell_width is not None and not self.cell_width > 0:
            raise StateError("cell_width must be positive")
        e.setflags(write=False)
        object.__setattr__(self, "elements", e)
        object.__setattr__(self, "residual", residual)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def __len__(self):
        return self.elements.shape[0]


def outcome_probabilities(rho, m: Povm) -> np.ndarray:
    """Raw ``tr[E_k rho]`` without renormalization."""
    rho = as_density(rho)
    if rho.dim != m.dim:
        raise StateError(f"dimension mismatch: state {rho.dim}, POVM {m.dim}")
    return np.einsum("kij,ji->k", m.elements, rho.matrix).real


def measure(rho, m: Povm) -> Distribution:
    p = outcome_probabilities(rho, m)
    total = p.sum()
    if abs(total - 1.0) > m.atol * np.sqrt(m.dim) + 1e-12:
        raise StateError(f"outcome probabilities sum to {total!r}")
    p = np.clip(p, 0.0, None)
    return Distribution(p / p.sum(), labels=m.labels, cell_width=m.cell_width)


def projective_povm(vectors, labels=None, cell_width=None, complete: bool = True) -> Povm:
    """Rank-one projectors onto the orthonormal columns of ``vectors``.

    If the columns do not span the space and ``complete`` is set, the
    projector onto the orthogonal complement is appended as a final outcome.
    """
    v = np.asarray(vectors, dtype=complex)
    elems = [np.outer(v[:, k], v[:, k].conj()) for k in range(v.shape[1])]
    rest = np.eye(v.shape[0]) - sum(elems)
    if complete and np.linalg.norm(rest) > 1e-10:
        elems.append(rest)
        if labels is not None:
            labels = list(labels) + ["rest"]
    return Povm(np.array(elems), labels=labels, cell_width=cell_width)


def basis_povm(dim: int, labels=None) -> Povm:
    return projective_povm(np.eye(dim), labels=labels if labels is not None else tuple(range(dim)))


def trivial_povm(dim: int) -> Povm:
    return Povm(np.eye(dim, dtype=complex)[None])


def random_povm(dim: int, n_outcomes: int, seed=None) -> Povm:
    """Random POVM obtained by normalizing Wishart-distributed operators."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_outcomes, dim, dim)) + 1j * rng.standard_normal((n_outcomes, dim, dim))
    a = g @ g.conj().transpose(0, 2, 1)
    w, u = np.linalg.eigh(a.sum(axis=0))
    s_inv_half = (u / np.sqrt(w)) @ u.conj().T
    return Povm(s_inv_half @ a @ s_inv_half)
