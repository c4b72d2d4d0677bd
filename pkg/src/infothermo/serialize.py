"""
JSON file formats for operators and states, and deterministic number output.

Operator / state files look like::

    {"kind": "state", "dim": 2, "subsystem_dims": [2],
     "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}

Each matrix entry is either a real number or a ``[re, im]`` pair. ``kind``
and ``subsystem_dims`` are optional. A diagonal shorthand
``{"diagonal": [0, 1]}`` is accepted for Hamiltonians and states.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from .qstate import DensityMatrix, HermitianOperator, ValidationError

SIG_DIGITS = 12
# magnitudes below this are rounding noise of O(1) quantities; printing them
# would make output depend on the BLAS build
NOISE_FLOOR = 1e-13


def round_sig(x: float) -> float:
    """Round to 12 significant digits; ``|x| < 1e-13`` and ``-0.0`` become ``0.0``."""
    if abs(x) < NOISE_FLOOR:
        return 0.0
    return float(f"{float(x):.{SIG_DIGITS}g}")


def clean(obj):
    """Recursively make ``obj`` JSON-ready with fixed-precision floats; infinities become strings."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return clean(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return round_sig(x)
    if isinstance(obj, complex):
        return [round_sig(obj.real), round_sig(obj.imag)]
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), indent=2) + "\n"


def _entry(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise ValidationError(f"matrix entry at {where} must be a number or [re, im], got {v!r}")


def matrix_from_json(doc: dict, name: str = "matrix") -> tuple[np.ndarray, tuple[int, ...] | None]:
    if not isinstance(doc, dict):
        raise ValidationError(f"{name}: top level must be a JSON object")
    dims = doc.get("subsystem_dims")
    if dims is not None:
        if not (isinstance(dims, list) and all(isinstance(d, int) and d > 0 for d in dims)):
            raise ValidationError(f"{name}: subsystem_dims must be a list of positive integers")
        dims = tuple(dims)
    if "diagonal" in doc:
        diag = doc["diagonal"]
        if not isinstance(diag, list) or not diag:
            raise ValidationError(f"{name}: diagonal must be a non-empty list")
        m = np.diag([_entry(v, f"diagonal[{i}]") for i, v in enumerate(diag)])
    elif "matrix" in doc:
        rows = doc["matrix"]
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise ValidationError(f"{name}: matrix must be a non-empty list of rows")
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValidationError(f"{name}: matrix must be square, got {n} rows of lengths {[len(r) for r in rows]}")
        m = np.array([[_entry(v, f"[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)])
    else:
        raise ValidationError(f"{name}: needs a 'matrix' or 'diagonal' field")
    if "dim" in doc and doc["dim"] != m.shape[0]:
        raise ValidationError(f"{name}: dim {doc['dim']} does not match matrix size {m.shape[0]}")
    if not np.isfinite(m).all():
        raise ValidationError(f"{name}: matrix entries must be finite")
    return m, dims


def _load(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def load_hamiltonian(path) -> HermitianOperator:
    m, dims = matrix_from_json(_load(path), str(path))
    try:
        return HermitianOperator(m, dims)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def load_state(path) -> DensityMatrix:
    m, dims = matrix_from_json(_load(path), str(path))
    try:
        return DensityMatrix(m, dims)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(_load(path), str(path))[0]


def matrix_to_json(m: np.ndarray, kind: str, subsystem_dims=None) -> dict:
    m = np.asarray(m, dtype=complex)
    doc = {"kind": kind, "dim": int(m.shape[0])}
    if subsystem_dims is not None:
        doc["subsystem_dims"] = [int(d) for d in subsystem_dims]
    doc["matrix"] = [[[v.real, v.imag] for v in row] for row in m]
    return doc


def state_to_json(rho: DensityMatrix) -> dict:
    return matrix_to_json(rho.matrix, "state", rho.subsystem_dims)


def hamiltonian_to_json(H: HermitianOperator) -> dict:
    return matrix_to_json(H.matrix, "hamiltonian", H.subsystem_dims)
