"""Input validation helpers shared by the functional core and the estimators."""

from __future__ import annotations

import numpy as np

__all__ = [
    "check_signal",
    "check_samples",
    "check_index_set",
    "check_positive",
]


def check_signal(x, name: str = "signal") -> np.ndarray:
    """Coerce ``x`` to a 1-D complex128 array and enforce the signal invariants.

    Raises ValueError for empty input or non-finite entries.
    """
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty input")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def check_samples(X, name: str = "samples") -> np.ndarray:
    """Coerce a sample collection (list of signals or 2-D array, rows = samples)."""
    if isinstance(X, (list, tuple)):
        if len(X) == 0:
            raise ValueError("empty input")
        rows = [check_signal(row, name=f"{name}[{i}]") for i, row in enumerate(X)]
        lengths = {row.size for row in rows}
        if len(lengths) != 1:
            raise ValueError(f"{name} rows have unequal lengths {sorted(lengths)}")
        return np.vstack(rows)
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def check_index_set(B, n: int, name: str = "index set") -> np.ndarray:
    """Validate an index set over {0..n-1}; returns a sorted unique int array."""
    idx = np.asarray(list(B) if not isinstance(B, np.ndarray) else B, dtype=np.intp)
    if idx.ndim == 0:
        idx = idx.reshape(1)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"{name} index out of range [0, {n})")
    return np.unique(idx)


def check_positive(value, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value
