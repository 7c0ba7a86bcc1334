"""Spin matrices, Wigner D-matrices, Euler-angle grids and coupled spin bases.

Spins are passed as ``two_j`` (an integer equal to 2j), so half-integers are
exact. Basis vectors of a spin-j irrep are ordered ``m = j, j-1, ..., -j``.
Rotations use the z-y-z Euler convention,
``D(alpha, beta, gamma) = exp(-i Jz alpha) exp(-i Jy beta) exp(-i Jz gamma)``,
with hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

MAX_TWO_J_WIGNER = 40

_FACT = [math.factorial(k) for k in range(MAX_TWO_J_WIGNER + 2)]


def as_two_j(j) -> int:
    """Convert a spin given as int, float, str or Fraction to ``2j``."""
    two_j = Fraction(j) * 2
    if two_j.denominator != 1 or two_j < 0:
        raise ValueError(f"spin must be a nonnegative half-integer, got {j!r}")
    return int(two_j)


def m_values(two_j: int) -> np.ndarray:
    return (two_j - 2 * np.arange(two_j + 1)) / 2.0


def spin_matrices(two_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(Jx, Jy, Jz)`` for spin ``two_j / 2``."""
    m = m_values(two_j)
    j = two_j / 2.0
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); index of m+1 is one less than that of m
    jp = np.zeros((two_j + 1, two_j + 1), dtype=complex)
    for i in range(1, two_j + 1):
        jp[i - 1, i] = math.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jm = jp.conj().T
    return (jp + jm) / 2, (jp - jm) / 2j, np.diag(m).astype(complex)


@lru_cache(maxsize=None)
def _small_d_terms(two_j: int):
    """Per-entry lists of (coefficient, cos power, sin power) for little-d."""
    if two_j > MAX_TWO_J_WIGNER:
        raise ValueError(f"Wigner matrices are tabulated up to 2j = {MAX_TWO_J_WIGNER}")
    n = two_j + 1
    terms = [[None] * n for _ in range(n)]
    for r in range(n):
        a, b = two_j - r, r  # j + m', j - m'
        for c_idx in range(n):
            c, e = two_j - c_idx, c_idx  # j + m, j - m
            pref = math.sqrt(_FACT[a] * _FACT[b] * _FACT[c] * _FACT[e])
            entry = []
            for k in range(max(0, c - a), min(c, b) + 1):
                den = _FACT[c - k] * _FACT[k] * _FACT[b - k] * _FACT[k + a - c]
                sign = -1.0 if (k + a - c) % 2 else 1.0
                entry.append((sign * pref / den, two_j - 2 * k + c - a, 2 * k - c + a))
            terms[r][c_idx] = entry
    return terms


def wigner_small_d(two_j: int, beta: float) -> np.ndarray:
    """Little-d matrix ``d^j_{m'm}(beta) = <j m'| exp(-i Jy beta) |j m>``."""
    cb, sb = math.cos(beta / 2), math.sin(beta / 2)
    terms = _small_d_terms(two_j)
    n = two_j + 1
    out = np.empty((n, n))
    for r in range(n):
        for c in range(n):
            out[r, c] = sum(coef * cb**pc * sb**ps for coef, pc, ps in terms[r][c])
    return out


def wigner_d(two_j: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Wigner D-matrix in the z-y-z convention."""
    m = m_values(two_j)
    return np.exp(-1j * m * alpha)[:, None] * wigner_small_d(two_j, beta) * np.exp(-1j * m * gamma)[None, :]


def _rz(t):
    c, s = np.cos(t), np.sin(t)
    z, o = np.zeros_like(c), np.ones_like(c)
    return np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1), np.stack([z, z, o], -1)], -2)


def _ry(t):
    c, s = np.cos(t), np.sin(t)
    z, o = np.zeros_like(c), np.ones_like(c)
    return np.stack([np.stack([c, z, s], -1), np.stack([z, o, z], -1), np.stack([-s, z, c], -1)], -2)


def euler_to_rotation(alpha, beta, gamma) -> np.ndarray:
    """SO(3) matrices ``Rz(alpha) Ry(beta) Rz(gamma)``; broadcasts over arrays."""
    alpha, beta, gamma = (np.asarray(x, dtype=float) for x in (alpha, beta, gamma))
    return _rz(alpha) @ _ry(beta) @ _rz(gamma)


def rotation_to_euler(r: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :func:`euler_to_rotation` with alpha, gamma in [0, 2pi), beta in [0, pi]."""
    r = np.asarray(r)
    beta = np.arccos(np.clip(r[..., 2, 2], -1.0, 1.0))
    alpha = np.arctan2(r[..., 1, 2], r[..., 0, 2])
    gamma = np.arctan2(r[..., 2, 1], -r[..., 2, 0])
    # gimbal lock: only alpha + gamma (or alpha - gamma) is defined
    lock = np.abs(np.sin(beta)) < 1e-12
    if np.any(lock):
        a_l = np.arctan2(r[..., 1, 0], r[..., 0, 0])
        alpha = np.where(lock, a_l, alpha)
        gamma = np.where(lock, 0.0, gamma)
    return np.mod(alpha, 2 * np.pi), beta, np.mod(gamma, 2 * np.pi)


@dataclass(frozen=True)
class EulerGrid:
    """Product grid of cells in (alpha, beta, gamma) carrying exact Haar measure.

    Cell measures are normalized so the whole group has measure 1;
    ``volume`` converts to the unnormalized Euler volume ``8 pi^2``.
    """

    n_alpha: int
    n_beta: int
    n_gamma: int

    volume = 8 * math.pi**2

    def __post_init__(self):
        if min(self.n_alpha, self.n_beta, self.n_gamma) < 1:
            raise ValueError("grid sizes must be positive")

    @classmethod
    def cubic(cls, n: int) -> "EulerGrid":
        return cls(n, n, n)

    @property
    def size(self) -> int:
        return self.n_alpha * self.n_beta * self.n_gamma

    def angles(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Cell-centre Euler angles, flattened in (alpha, beta, gamma) C order."""
        a = (np.arange(self.n_alpha) + 0.5) * 2 * np.pi / self.n_alpha
        b = (np.arange(self.n_beta) + 0.5) * np.pi / self.n_beta
        g = (np.arange(self.n_gamma) + 0.5) * 2 * np.pi / self.n_gamma
        aa, bb, gg = np.meshgrid(a, b, g, indexing="ij")
        return aa.ravel(), bb.ravel(), gg.ravel()

    def measures(self) -> np.ndarray:
        edges = np.linspace(0.0, np.pi, self.n_beta + 1)
        wb = (np.cos(edges[:-1]) - np.cos(edges[1:])) / 2
        w = np.broadcast_to(wb[None, :, None], (self.n_alpha, self.n_beta, self.n_gamma))
        return (w / (self.n_alpha * self.n_gamma)).ravel()

    def rotations(self) -> np.ndarray:
        return euler_to_rotation(*self.angles())

    def cell_index(self, r: np.ndarray) -> np.ndarray:
        """Index of the cell containing each rotation matrix."""
        a, b, g = rotation_to_euler(r)
        ia = np.minimum((a / (2 * np.pi) * self.n_alpha).astype(int), self.n_alpha - 1)
        ib = np.minimum((b / np.pi * self.n_beta).astype(int), self.n_beta - 1)
        ig = np.minimum((g / (2 * np.pi) * self.n_gamma).astype(int), self.n_gamma - 1)
        return (ia * self.n_beta + ib) * self.n_gamma + ig


def _embed(op: np.ndarray, k: int, dims: Sequence[int]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for i, d in enumerate(dims):
        out = np.kron(out, op if i == k else np.eye(d))
    return out


def total_spin_matrices(two_js: Sequence[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Total angular momentum operators on a tensor product of spins."""
    dims = [t + 1 for t in two_js]
    tot = [np.zeros((int(np.prod(dims)),) * 2, dtype=complex) for _ in range(3)]
    for k, t in enumerate(two_js):
        for a, op in enumerate(spin_matrices(t)):
            tot[a] += _embed(op, k, dims)
    return tot[0], tot[1], tot[2]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-10))
    return v * (abs(v[k]) / v[k])


def coupled_basis(two_js: Sequence[int]) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Decompose a tensor product of spins into total-J irreps.

    Returns ``(blocks, U)`` where ``blocks`` lists ``(two_J, multiplicity)``
    in descending J and the columns of ``U`` are the coupled basis vectors
    expressed in the product basis. Within a block the column index is
    ``m_index * multiplicity + copy``, i.e. the block is spin (x) multiplicity.
    Highest-weight vectors follow the Condon-Shortley sign convention for
    multiplicity-free couplings.
    """
    jx, jy, jz = total_spin_matrices(two_js)
    jp, jm = jx + 1j * jy, jx - 1j * jy
    two_m = np.rint(2 * np.diag(jz).real).astype(int)
    dim = jz.shape[0]
    blocks: list[tuple[int, int]] = []
    columns: list[np.ndarray] = []
    found = np.zeros((dim, 0), dtype=complex)
    for two_big_j in range(int(two_m.max()), -1, -2):
        sector = np.flatnonzero(two_m == two_big_j)
        if sector.size == 0:
            continue
        sub = np.eye(dim)[:, sector].astype(complex)
        # highest weights: killed by J+ and orthogonal to earlier irreps
        constraint = jp @ sub
        if found.shape[1]:
            constraint = np.vstack([constraint, found.conj().T @ sub])
        kernel = null_space(constraint, rcond=1e-10)
        mult = kernel.shape[1]
        if mult == 0:
            continue
        tops = [_fix_phase(sub @ kernel[:, c]) for c in range(mult)]
        ladders = []
        for top in tops:
            vecs = [top]
            for _ in range(two_big_j):
                w = jm @ vecs[-1]
                vecs.append(w / np.linalg.norm(w))
            ladders.append(vecs)
        for mi in range(two_big_j + 1):
            for c in range(mult):
                columns.append(ladders[c][mi])
        found = np.column_stack([found] + [v for lad in ladders for v in lad])
        blocks.append((two_big_j, mult))
    u = np.column_stack(columns)
    return blocks, u


def spin_label(two_j: int) -> str:
    return str(Fraction(two_j, 2))
