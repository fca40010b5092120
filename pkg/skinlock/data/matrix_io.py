"""
JSON codecs for SkinLock matrices, spectra, correlators and jump sets.

All files share one matrix layout, {"dim", "labels", "re", "im"} with
row-major nested lists. Floats are written with Python's shortest
round-trip repr, so reading a file back reproduces every double exactly;
non-finite values become null.
"""

import json
import math
from typing import Any, List, Optional

import numpy as np

from ..errors import ParameterError
from ..models import JumpSet, RelaxationMatrix, SourceMatrix


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy values and non-finite floats to JSON-safe types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': to_jsonable(value.real), 'im': to_jsonable(value.imag)}
    return value


def dumps(payload: Any) -> str:
    """Deterministic JSON text: insertion-ordered keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(payload), indent=2, allow_nan=False) + "\n"


def write_json(path: str, payload: Any) -> str:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps(payload))
    return path


def read_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ParameterError(f"cannot read {path}: {e}") from e


def matrix_to_dict(entries, labels: Optional[List[str]] = None) -> dict:
    """Matrix JSON layout for any square array."""
    array = np.asarray(entries, dtype=complex)
    dim = array.shape[0]
    return {
        'dim': dim,
        'labels': list(labels) if labels else [str(j) for j in range(1, dim + 1)],
        're': array.real.tolist(),
        'im': array.imag.tolist(),
    }


def read_relaxation_matrix(path: str) -> RelaxationMatrix:
    return RelaxationMatrix.from_dict(_require_dict(read_json(path), path))


def read_source_matrix(path: str) -> SourceMatrix:
    return SourceMatrix.from_dict(_require_dict(read_json(path), path))


def read_pump_rates(path: str) -> List[float]:
    """Per-site pump rates from a JSON list or an object with a 'y' list."""
    data = read_json(path)
    rates = data.get('y') if isinstance(data, dict) else data
    if not isinstance(rates, list) or not rates:
        raise ParameterError(f"{path} must hold a non-empty list of pump rates")
    try:
        return [float(y) for y in rates]
    except (TypeError, ValueError) as e:
        raise ParameterError(f"{path}: pump rates must be numbers ({e})") from e


def read_jump_set(path: str) -> JumpSet:
    data = _require_dict(read_json(path), path)
    try:
        return JumpSet.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise ParameterError(f"malformed jump set in {path}: {e}") from e


def _require_dict(data: Any, path: str) -> dict:
    if not isinstance(data, dict):
        raise ParameterError(f"{path} must hold a JSON object")
    return data
