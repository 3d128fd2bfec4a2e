"""JSON state files: ``{"dims": [...], "matrix": [[re, im], ...]}`` or ``"vector"``."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .tensor import DensityMatrix, PureState


class StateFileError(ValueError):
    """Malformed state file; ``line``/``column`` locate JSON syntax errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


def _pairs(values, what: str) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"{what} must be a list of [re, im] number pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise StateFileError(f"{what} must be a list of [re, im] number pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def state_from_dict(doc: dict) -> DensityMatrix | PureState:
    if not isinstance(doc, dict) or "dims" not in doc:
        raise StateFileError("state file must be an object with a 'dims' field")
    has_m, has_v = "matrix" in doc, "vector" in doc
    if has_m == has_v:
        raise StateFileError("state file needs exactly one of 'matrix' or 'vector'")
    dims = doc["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise StateFileError("'dims' must be a list of integers")
    side = int(np.prod(dims))
    if has_v:
        amp = _pairs(doc["vector"], "'vector'")
        if amp.size != side:
            raise StateFileError(f"'vector' has {amp.size} entries, expected {side} for dims {dims}")
        return PureState(amp, dims)
    entries = _pairs(doc["matrix"], "'matrix'")
    if entries.size != side * side:
        raise StateFileError(f"'matrix' has {entries.size} entries, expected {side * side} for dims {dims}")
    return DensityMatrix(entries.reshape(side, side), dims)


def state_to_dict(state: DensityMatrix | PureState) -> dict:
    data = state.amp if isinstance(state, PureState) else state.mat.reshape(-1)
    key = "vector" if isinstance(state, PureState) else "matrix"
    return {"dims": list(state.dims), key: [[float(z.real), float(z.imag)] for z in data]}


def parse_state(text: str) -> DensityMatrix | PureState:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    return state_from_dict(doc)


def read_state(path) -> DensityMatrix | PureState:
    return parse_state(Path(path).read_text())


def write_state(state: DensityMatrix | PureState, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state)))
