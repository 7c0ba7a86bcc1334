"""Result containers shared by the estimation simulators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

LINK_TOL = 1e-9


@dataclass(frozen=True)
class BoundLink:
    """One inequality ``lhs <= rhs`` with ``slack = rhs - lhs``."""

    name: str
    lhs: float
    rhs: float
    tolerance: float = LINK_TOL

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -self.tolerance

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "holds": self.holds,
        }


@dataclass
class EstimationReport:
    """Entropies (bits), volumes and the checked bound chain of one simulation.

    Entropies of continuous variables are differential, computed with the
    cell measure of the grid. ``extras`` carries simulator-specific values.
    """

    h_prior: float
    h_err: float
    mutual_info_estimate: float
    mutual_info_outcome: float
    holevo_chi: float
    asymmetry: float
    bound_chain: list[BoundLink]
    rmse: float | None = None
    grid_tolerance: float = 0.0
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def v0(self) -> float:
        return 2.0**self.h_prior

    @property
    def v_err(self) -> float:
        return 2.0**self.h_err

    @property
    def reduction(self) -> float:
        return self.h_prior - self.h_err

    @property
    def min_slack(self) -> float:
        return min(link.slack for link in self.bound_chain)

    @property
    def all_hold(self) -> bool:
        return all(link.holds for link in self.bound_chain)

    def link(self, name: str) -> BoundLink:
        for lk in self.bound_chain:
            if lk.name == name:
                return lk
        raise KeyError(name)

    def as_dict(self) -> dict[str, Any]:
        out = {
            "h_prior": self.h_prior,
            "h_err": self.h_err,
            "v0": self.v0,
            "v_err": self.v_err,
            "reduction": self.reduction,
            "mutual_info_estimate": self.mutual_info_estimate,
            "mutual_info_outcome": self.mutual_info_outcome,
            "holevo_chi": self.holevo_chi,
            "asymmetry": self.asymmetry,
            "rmse": self.rmse,
            "grid_tolerance": self.grid_tolerance,
            "bound_chain": [lk.as_dict() for lk in self.bound_chain],
            "min_slack": self.min_slack,
            "all_hold": self.all_hold,
        }
        out.update(self.extras)
        return out


def discrete_mutual_information(joint) -> float:
    """Mutual information in bits of a dense 2-D joint probability array."""
    p = np.asarray(joint, dtype=float)
    pa = p.sum(axis=1, keepdims=True)
    pb = p.sum(axis=0, keepdims=True)
    live = p > 0
    return max(float(np.sum(p[live] * np.log2(p[live] / (pa @ pb)[live]))), 0.0)


def entropy_bits(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))

