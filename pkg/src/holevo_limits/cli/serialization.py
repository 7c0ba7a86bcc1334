"""JSON encoding of matrices, POVMs, ensembles and spin blocks.

Complex matrices are row-major lists of ``[re, im]`` pairs, e.g. a 2x2
matrix is ``[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]``.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from ..holevo import SignalEnsemble
from ..povm import Povm
from ..qstate import DensityOperator, Distribution, StateError
from ..symmetry import SpinDecomposition


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise StateError(f"complex matrix must be rows of [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def vector_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        return arr.astype(complex)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    raise StateError("vector must be a list of reals or of [re, im] pairs")


def density_to_json(rho: DensityOperator) -> dict:
    return {"dim": rho.dim, "matrix": matrix_to_json(rho.matrix)}


def density_from_json(data: dict) -> DensityOperator:
    m = matrix_from_json(data["matrix"])
    if "dim" in data and m.shape[0] != data["dim"]:
        raise StateError(f"declared dim {data['dim']} does not match matrix size {m.shape[0]}")
    return DensityOperator(m)


def povm_to_json(p: Povm) -> dict:
    out: dict[str, Any] = {"dim": p.dim, "elements": [matrix_to_json(e) for e in p.elements]}
    if p.labels is not None:
        out["labels"] = list(p.labels)
    if p.cell_width is not None:
        out["cell_width"] = p.cell_width
    return out


def povm_from_json(data: dict) -> Povm:
    elems = np.array([matrix_from_json(e) for e in data["elements"]])
    return Povm(elems, labels=data.get("labels"), cell_width=data.get("cell_width"))


def ensemble_to_json(e: SignalEnsemble) -> dict:
    return {"states": [density_to_json(s) for s in e.states], "prior": e.prior.probs.tolist()}


def ensemble_from_json(data: dict) -> SignalEnsemble:
    states = tuple(density_from_json(s) for s in data["states"])
    return SignalEnsemble(states, Distribution(np.asarray(data["prior"], dtype=float)))


def spin_blocks_to_json(s: SpinDecomposition) -> list:
    return [[t, m] for t, m in s.blocks]


def spin_blocks_from_json(data) -> SpinDecomposition:
    return SpinDecomposition(tuple((int(t), int(m)) for t, m in data))


def sanitize(obj):
    """Replace non-finite floats by strings and numpy scalars by Python values."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj) -> str:
    return json.dumps(sanitize(obj), indent=2, sort_keys=True) + "\n"
