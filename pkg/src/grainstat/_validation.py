"""Input checks shared by the estimators, the filters and the CLI."""
from __future__ import annotations

import numbers

import numpy as np


def check_binary_image(X, name: str = "X") -> np.ndarray:
    """Return ``X`` as a 2-D boolean array; only 0/1 (or bool) values allowed."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"{name} must be a 2-D image, got shape {X.shape}")
    if X.size == 0:
        raise ValueError(f"{name} is empty")
    if X.dtype == bool:
        return X
    if not np.all((X == 0) | (X == 1)):
        raise ValueError(f"{name} must only contain 0 and 1")
    return X.astype(bool)


def check_gray_image(X, name: str = "X") -> np.ndarray:
    """Return ``X`` as a 2-D uint8 array of levels in [0, 255]."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"{name} must be a 2-D image, got shape {X.shape}")
    if X.dtype == bool:
        raise TypeError(f"{name} is a boolean image; expected grey levels")
    if X.size and not np.issubdtype(X.dtype, np.integer):
        if not np.all(np.isfinite(X)) or np.any(X != np.round(X)):
            raise ValueError(f"{name} grey levels must be integers")
    if X.size and (X.min() < 0 or X.max() > 255):
        raise ValueError(f"{name} grey levels must lie in [0, 255]")
    return X.astype(np.uint8)


def check_probability(value, name: str, *, open_low: bool = False, open_high: bool = False) -> float:
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    low_ok = value > 0 if open_low else value >= 0
    high_ok = value < 1 if open_high else value <= 1
    if not (low_ok and high_ok):
        lo, hi = "(" if open_low else "[", ")" if open_high else "]"
        raise ValueError(f"{name} must lie in {lo}0, 1{hi}, got {value}")
    return value
