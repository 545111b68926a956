"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from sklearn.utils import check_array

from .geometry import Circle


def check_positive(name: str, value) -> float:
    v = float(value)
    if not (math.isfinite(v) and v > 0):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return v


def check_thresholds(X) -> np.ndarray:
    """1-D array of positive data thresholds; a column vector is flattened."""
    arr = check_array(np.asarray(X, dtype=float).reshape(-1, 1), ensure_2d=True)
    arr = arr.ravel()
    if np.any(arr <= 0):
        raise ValueError("data thresholds must be positive")
    return arr


def check_circle(c, name: str = "circle") -> Circle:
    if isinstance(c, Circle):
        return c
    try:
        (x, y), r = c
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a Circle or ((x, y), radius)") from None
    return Circle((x, y), r)


def check_circles(cs: Sequence, name: str = "buildings") -> tuple:
    return tuple(check_circle(c, f"{name}[{k}]") for k, c in enumerate(cs))
