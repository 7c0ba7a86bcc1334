"""Closed-form Heisenberg-limit calculators: integer entropy, multimode and rotations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..qstate import Distribution, StateError, as_density, shannon_entropy, von_neumann_entropy
from ..symmetry import SpinDecomposition, g_asymmetry_so3, mode_number, total_number

TWO_PI_E = 2 * math.pi * math.e


def mow_bound(variance: float) -> float:
    """Maximum entropy (bits) of an integer variable with the given variance."""
    return 0.5 * math.log2(TWO_PI_E * (variance + 1.0 / 12.0))


def mow_bound_check(d: Distribution) -> float:
    """Slack ``1/2 log2(2 pi e (Var + 1/12)) - H`` for an integer-valued distribution."""
    vals = d.values()
    if np.any(np.abs(vals - np.rint(vals)) > 1e-12):
        raise StateError("integer entropy bound needs integer outcome labels")
    plain = Distribution(d.probs, labels=d.labels)
    return mow_bound(plain.variance()) - shannon_entropy(plain)


def integer_distribution(probs: Sequence[float], start: int = 0) -> Distribution:
    p = np.asarray(probs, dtype=float)
    return Distribution(p / p.sum(), labels=tuple(range(start, start + p.size)))


@dataclass(frozen=True)
class MultimodeBounds:
    """Lower bounds on ``L_err / L_0`` for an M-mode probe."""

    n_modes: int
    h_total: float
    mean_total: float
    var_total: float
    mode_std: tuple[float, ...]
    exact: float
    correlated: float
    product: float
    central_limit: float
    mean_number: float
    product_applicable: bool
    central_limit_applicable: bool

    def as_dict(self) -> dict:
        return {
            "n_modes": self.n_modes,
            "h_total": self.h_total,
            "mean_total": self.mean_total,
            "var_total": self.var_total,
            "mode_std": list(self.mode_std),
            "bounds": {
                "exact_entropy": self.exact,
                "correlated": self.correlated,
                "product": self.product,
                "central_limit": self.central_limit,
                "mean_number": self.mean_number,
            },
            "applicable": {
                "exact_entropy": True,
                "correlated": True,
                "product": self.product_applicable,
                "central_limit": self.central_limit_applicable,
                "mean_number": True,
            },
        }


def _assemble(m: int, total: np.ndarray, mode_var: np.ndarray, product: bool, identical: bool) -> MultimodeBounds:
    total = np.clip(total, 0.0, None)
    d_total = integer_distribution(total / total.sum())
    std = np.sqrt(np.clip(mode_var, 0.0, None))
    h = shannon_entropy(d_total)
    mean = d_total.mean()
    var = d_total.variance()
    avg_std = float(std.mean())
    avg_var = float(mode_var.mean())
    clt = 1.0 / (math.sqrt(TWO_PI_E * m) * avg_std) if avg_std > 0 else math.inf
    return MultimodeBounds(
        n_modes=m,
        h_total=h,
        mean_total=mean,
        var_total=var,
        mode_std=tuple(float(x) for x in std),
        exact=2.0**-h,
        correlated=1.0 / math.sqrt(TWO_PI_E * (m**2 * avg_std**2 + 1.0 / 12.0)),
        product=1.0 / math.sqrt(TWO_PI_E * (m * avg_var + 1.0 / 12.0)),
        central_limit=clt,
        mean_number=1.0 / (math.e * (mean + 1.0)),
        product_applicable=product,
        central_limit_applicable=product and identical,
    )


def multimode_bounds(rho=None, dims: Sequence[int] | None = None, *, mode_probs=None) -> MultimodeBounds:
    """Bounds for a joint probe state or for independent modes.

    Pass either a density operator on modes with truncations ``dims`` or,
    for product probes, ``mode_probs``: one photon-number distribution per
    mode, combined by convolution.
    """
    if mode_probs is not None:
        probs = [np.asarray(p, dtype=float) / np.sum(p) for p in mode_probs]
        total = np.array([1.0])
        var = []
        for p in probs:
            total = np.convolve(total, p)
            k = np.arange(p.size)
            var.append(float(np.dot(p, k**2) - np.dot(p, k) ** 2))
        identical = all(p.shape == probs[0].shape and np.allclose(p, probs[0], atol=1e-12) for p in probs)
        return _assemble(len(probs), total, np.array(var), True, identical)
    if rho is None or dims is None:
        raise StateError("give a state with mode dims, or per-mode distributions")
    rho = as_density(rho)
    dims = [int(x) for x in dims]
    if int(np.prod(dims)) != rho.dim:
        raise StateError(f"mode dims {dims} do not match state dimension {rho.dim}")
    m = len(dims)
    diag = np.clip(np.diag(rho.matrix).real, 0.0, None)
    levels = [np.asarray(mode_number(dims, k).levels, dtype=float) for k in range(m)]
    means = np.array([diag @ lv for lv in levels])
    cov = np.array([[diag @ (a * b) for b in levels] for a in levels]) - np.outer(means, means)
    nt = np.asarray(total_number(dims).levels)
    total = np.bincount(nt, weights=diag)
    off = cov - np.diag(np.diag(cov))
    product = bool(np.max(np.abs(off), initial=0.0) <= 1e-12)
    marg = [np.bincount(levels[k].astype(int), weights=diag) for k in range(m)]
    identical = all(mg.shape == marg[0].shape and np.allclose(mg, marg[0], atol=1e-12) for mg in marg)
    return _assemble(m, total, np.diag(cov).copy(), product, identical)


@dataclass(frozen=True)
class MagneticFieldSpec:
    """Field estimation setup with aliasing magnitude ``B_pi = 2 pi / (mu T)``.

    The prior is uniform on a ball of radius ``prior_radius`` (default
    ``B_pi``) with Lebesgue measure; radii beyond ``B_pi`` are rejected
    because fields are only identifiable modulo that magnitude.
    """

    mu: float
    t_int: float
    prior_radius: float | None = None

    def __post_init__(self):
        if not self.mu > 0 or not self.t_int > 0:
            raise StateError("magnetic moment and interaction time must be positive")
        r = self.b_pi if self.prior_radius is None else self.prior_radius
        if not r > 0:
            raise StateError("prior radius must be positive")
        if r > self.b_pi * (1 + 1e-12):
            raise StateError(f"prior radius {r} exceeds the aliasing magnitude B_pi = {self.b_pi}")
        object.__setattr__(self, "prior_radius", float(r))

    @property
    def b_pi(self) -> float:
        return 2 * math.pi / (self.mu * self.t_int)

    @property
    def prior_entropy(self) -> float:
        """Differential entropy (bits) of the uniform ball prior."""
        return math.log2(4 * math.pi * self.prior_radius**3 / 3)


UNIFORM_BALL_CONSTANT = (math.pi * math.e**3 / 6) ** (-1.0 / 6.0)


def field_bounds(asymmetry: float, h_field: float) -> dict[str, float]:
    """Volume-ratio, determinant and trace error bounds for a given asymmetry."""
    return {
        "volume_ratio": 2.0**-asymmetry,
        "d_err": TWO_PI_E ** (-1.5) * 2.0**h_field * 2.0**-asymmetry,
        "t_err": (TWO_PI_E / 3) ** (-0.5) * 2.0 ** (h_field / 3) * 2.0 ** (-asymmetry / 3),
    }


def rotation_bound_calculator(s: SpinDecomposition, rho, field: MagneticFieldSpec) -> dict[str, float]:
    """Heisenberg limits for rotation and field estimation with probe ``rho``."""
    rho = as_density(rho)
    a = g_asymmetry_so3(rho, s)
    out = {"asymmetry": a, "s_probe": von_neumann_entropy(rho), "b_pi": field.b_pi, "h_field": field.prior_entropy}
    out.update(field_bounds(a, field.prior_entropy))
    out["t_err_over_b_pi"] = out["t_err"] / field.b_pi
    return out


def spin_j_uniform_ball_t_err(two_j: int) -> float:
    """``T_err / B_pi`` bound for a pure spin-j probe and uniform ball prior."""
    return UNIFORM_BALL_CONSTANT / (two_j + 1) ** (1.0 / 3.0)


def m_spin_scaling(two_j: int, ms: Sequence[int]) -> dict[str, object]:
    """Bounds for M spin-j probes using the ``j <= Mj`` asymmetry ceiling.

    Returns per-M values of the maximal asymmetry ``2 log2(Mj + 1)``, the
    volume-ratio bound ``(Mj + 1)^-2`` and the uniform-ball ``T_err / B_pi``
    bound, with least-squares log-log slopes against ``M``.
    """
    ms = np.asarray(ms, dtype=float)
    j = two_j / 2.0
    a = 2 * np.log2(ms * j + 1)
    v = 2.0**-a
    h_ball = math.log2(4 * math.pi / 3)
    t = (TWO_PI_E / 3) ** (-0.5) * 2.0 ** (h_ball / 3) * 2.0 ** (-a / 3)
    logm = np.log(ms)
    return {
        "m": ms.tolist(),
        "asymmetry": a.tolist(),
        "volume_ratio": v.tolist(),
        "t_err_over_b_pi": t.tolist(),
        "volume_slope": float(np.polyfit(logm, np.log(v), 1)[0]),
        "t_err_slope": float(np.polyfit(logm, np.log(t), 1)[0]),
    }

