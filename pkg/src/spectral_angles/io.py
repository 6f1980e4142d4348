"""JSON encodings of matrices, spectral sets, Sylvester problems and reports."""

import json
import math

import numpy as np

from .linalg import as_matrix
from .sylvester import SylvesterProblem


def matrix_to_json(m):
    """``{"rows", "cols", "entries": [[re, im], ...]}`` in row-major order."""
    m = np.asarray(m, dtype=np.complex128)
    rows, cols = m.shape
    return {
        "rows": rows,
        "cols": cols,
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj):
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from None
    if rows < 0 or cols < 0 or len(entries) != rows * cols:
        raise ValueError(f"matrix declares {rows}x{cols} but has {len(entries)} entries")
    vals = []
    for e in entries:
        if isinstance(e, (int, float)):
            vals.append(complex(e))
        elif len(e) == 2:
            vals.append(complex(float(e[0]), float(e[1])))
        else:
            raise ValueError(f"entry {e!r} is not [re, im]")
    return as_matrix(np.array(vals, dtype=np.complex128).reshape(rows, cols))


def problem_from_json(obj, normal=False):
    try:
        parts = [matrix_from_json(obj[k]) for k in ("B0", "B1", "T")]
    except KeyError as exc:
        raise ValueError(f"problem is missing {exc}") from None
    return SylvesterProblem.create(*parts, normal=normal)


def problem_to_json(p):
    return {"B0": matrix_to_json(p.B0), "B1": matrix_to_json(p.B1), "T": matrix_to_json(p.T)}


def jsonable(value):
    """Recursively convert numpy scalars and arrays; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def dumps(obj):
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
