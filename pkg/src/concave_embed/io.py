"""Reading and writing the JSON/CSV interchange formats.

Distance matrices::

    {"labels": ["a", "b", ...], "dist": [[0, 1, ...], ...]}

or a CSV grid with an optional header row of labels. Floats are written
with Python's shortest round-trip repr, so values survive a JSON round trip
exactly.
"""

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .exceptions import StructuralError
from .metric_core import FiniteMetricSpace
from .norms import NormSpec

__all__ = ["load_space", "space_from_dict", "space_to_dict", "load_norm", "dumps"]


def space_from_dict(data) -> FiniteMetricSpace:
    if not isinstance(data, dict):
        raise StructuralError("top level: expected an object with 'dist'")
    if "dist" not in data:
        raise StructuralError("dist: missing")
    dist = data["dist"]
    if not isinstance(dist, list) or not all(isinstance(row, list) for row in dist):
        raise StructuralError("dist: expected a list of rows")
    labels = data.get("labels")
    if labels is not None and not isinstance(labels, list):
        raise StructuralError("labels: expected a list")
    if labels is None:
        return FiniteMetricSpace.from_matrix(dist)
    return FiniteMetricSpace(tuple(labels), dist)


def space_to_dict(space: FiniteMetricSpace) -> dict:
    return {"labels": list(space.labels), "dist": space.dist.tolist()}


def _parse_csv(text) -> FiniteMetricSpace:
    rows = [row for row in csv.reader(_io.StringIO(text)) if any(cell.strip() for cell in row)]
    if not rows:
        raise StructuralError("dist: empty CSV")
    labels = None
    try:
        [float(cell) for cell in rows[0]]
    except ValueError:
        labels = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
    try:
        dist = [[float(cell) for cell in row] for row in rows]
    except ValueError as exc:
        raise StructuralError(f"dist: non-numeric CSV cell ({exc})") from None
    if len({len(row) for row in dist}) > 1:
        raise StructuralError("dist: CSV rows have different lengths")
    if labels is None:
        return FiniteMetricSpace.from_matrix(dist)
    return FiniteMetricSpace(tuple(labels), dist)


def load_space(path) -> FiniteMetricSpace:
    """Load a distance matrix from a ``.json`` or ``.csv`` file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StructuralError(f"input: cannot read {path} ({exc.strerror})") from None
    if path.suffix.lower() == ".csv":
        return _parse_csv(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"input: invalid JSON in {path} ({exc})") from None
    return space_from_dict(data)


def load_norm(source, dimension=None) -> NormSpec:
    """Load a NormSpec from a file path or an inline JSON object string.

    ``dimension`` fills in a missing ``"dimension"`` field for the ``sup``
    and ``sup_plus_l1`` kinds.
    """
    text = str(source)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise StructuralError(f"norm-spec: cannot read {source} ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"norm-spec: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise StructuralError("norm-spec: expected a JSON object")
    if "dimension" not in data and dimension is not None and data.get("kind") != "weighted_sup":
        data = {**data, "dimension": dimension}
    try:
        return NormSpec.from_dict(data)
    except KeyError as exc:
        raise StructuralError(f"{exc.args[0]}: missing from norm-spec") from None
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"norm-spec: {exc}") from None


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        # JSON has no inf/nan; emit strings so readers fail loudly, not silently
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj, indent=2) -> str:
    return json.dumps(_clean(obj), indent=indent)
