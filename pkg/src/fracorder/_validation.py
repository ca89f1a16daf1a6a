"""Input validation helpers shared across the package.

These are deliberately small and raise the package's typed exceptions rather
than bare ValueError, so the CLI and the estimator can map failures onto
stable exit codes / sklearn-style messages.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import BadOrder, BadPayload, DomainError, LengthMismatch, TimeNonpositive


def check_order(rho: float, *, name: str = "rho", lower: float = 0.0, upper: float = 1.0,
                include_upper: bool = True) -> float:
    """Validate a fractional order in (lower, upper] (or open on the right).

    Returns the value as a float so callers can pass ints or numpy scalars.
    """
    rho = float(rho)
    if not np.isfinite(rho):
        raise BadOrder(f"{name} must be finite, got {rho!r}")
    ok = lower < rho <= upper if include_upper else lower < rho < upper
    if not ok:
        right = "]" if include_upper else ")"
        raise BadOrder(f"{name}={rho!r} outside ({lower}, {upper}{right}")
    return rho


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_time(t: float, name: str = "t") -> float:
    t = float(t)
    if not np.isfinite(t) or t <= 0.0:
        raise TimeNonpositive(f"{name} must be > 0, got {t!r}")
    return t


def as_float_array(values: Sequence[float] | np.ndarray, name: str, *,
                   ndim: int = 1, positive: bool = False, nonempty: bool = True) -> np.ndarray:
    """Coerce to a float64 ndarray and validate finiteness/shape."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != ndim:
        raise BadPayload(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if nonempty and arr.size == 0:
        raise BadPayload(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise BadPayload(f"{name} contains non-finite entries")
    if positive and arr.size and np.min(arr) <= 0.0:
        raise BadPayload(f"{name} must be strictly positive everywhere")
    return arr


def check_same_length(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if len(a) != len(b):
        raise LengthMismatch(f"{what}: lengths {len(a)} and {len(b)} differ")


def as_observation_array(X) -> np.ndarray:
    """Validate estimator input: rows of (observation time, observed value).

    Accepts any array-like of shape (n_samples, 2) with positive times and
    positive observed values, returning a float64 copy.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise BadPayload(
            f"observations must have shape (n_samples, 2) with columns (t0, d0); got {arr.shape}")
    if arr.shape[0] == 0:
        raise BadPayload("observations must contain at least one row")
    if not np.all(np.isfinite(arr)):
        raise BadPayload("observations contain non-finite entries")
    if np.min(arr[:, 0]) <= 0.0:
        raise TimeNonpositive("observation times must be strictly positive")
    if np.min(arr[:, 1]) <= 0.0:
        raise BadPayload("observed values must be strictly positive")
    return np.array(arr, dtype=float)
