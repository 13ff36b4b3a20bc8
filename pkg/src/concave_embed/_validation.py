"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np

from .exceptions import StructuralError


def check_distance_matrix(dist, n_labels=None):
    """Return ``dist`` as a float64 square matrix or raise StructuralError.

    Only structural problems are caught here (shape, NaN, negative entries).
    Metric axioms are the job of :func:`concave_embed.metric_core.validate`.
    """
    try:
        arr = np.array(dist, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"dist: not a numeric matrix ({exc})") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise StructuralError(f"dist: expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise StructuralError("dist: need at least one point")
    if n_labels is not None and n_labels != arr.shape[0]:
        raise StructuralError(
            f"labels: {n_labels} labels for a {arr.shape[0]}x{arr.shape[0]} matrix"
        )
    if not np.all(np.isfinite(arr)):
        i, j = np.argwhere(~np.isfinite(arr))[0]
        raise StructuralError(f"dist: non-finite entry at ({i}, {j})")
    if np.any(arr < 0):
        i, j = np.argwhere(arr < 0)[0]
        raise StructuralError(f"dist: negative entry {arr[i, j]!r} at ({i}, {j})")
    return arr


def check_vector(v, dimension):
    arr = np.asarray(v, dtype=np.float64)
    if arr.shape[-1:] != (dimension,):
        raise ValueError(f"vector has shape {arr.shape}, expected last axis {dimension}")
    return arr


def check_positive(name, value, allow_zero=False):
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be {bound}, got {value!r}")
    return float(value)


def check_count(name, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
