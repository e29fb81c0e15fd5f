"""Input validation shared by the operator builders."""

from __future__ import annotations

import numpy as np

from .errors import DomainError

SYMMETRY_RTOL = 1e-12


def as_square(matrix, name="matrix") -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DomainError(f"{name} must be a square 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def check_symmetric(matrix, name="matrix", rtol=SYMMETRY_RTOL) -> np.ndarray:
    """Return ``matrix`` as a float array, raising if it is not symmetric.

    The asymmetry is measured relative to the largest entry so that the
    check is scale free.
    """
    arr = as_square(matrix, name)
    scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
    if arr.size and np.max(np.abs(arr - arr.T)) > rtol * scale:
        raise DomainError(f"{name} is not symmetric within relative tolerance {rtol:g}")
    return arr


def check_skew(matrix, name="matrix", rtol=SYMMETRY_RTOL) -> np.ndarray:
    arr = as_square(matrix, name)
    scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
    if arr.size and np.max(np.abs(arr + arr.T)) > rtol * scale:
        raise DomainError(f"{name} is not skew-symmetric")
    return arr


def check_degree(p: int, n: int, low: int = 1, high: int | None = None, name="p") -> int:
    high = n if high is None else high
    if int(p) != p:
        raise DomainError(f"{name} must be an integer, got {p!r}")
    p = int(p)
    if not low <= p <= high:
        raise DomainError(f"need {low} <= {name} <= {high}, got {name}={p} (n={n})")
    return p


def check_orthonormal_columns(frame, atol=1e-10, name="frame") -> np.ndarray:
    arr = np.asarray(frame, dtype=float)
    if arr.ndim != 2:
        raise DomainError(f"{name} must be 2-d")
    gram = arr.T @ arr
    if np.max(np.abs(gram - np.eye(arr.shape[1]))) > atol:
        raise DomainError(f"{name} columns are not orthonormal within {atol:g}")
    return arr
