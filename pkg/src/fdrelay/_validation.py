"""Input validation helpers shared by the estimators and the solvers."""

import numbers

import numpy as np

UNIT_NORM_TOL = 1e-9


def as_complex_vector(x, name="x", allow_zero=True):
    """Return `x` as a finite 1-D complex128 array.

    Scalars are promoted to length-1 vectors so that single-antenna
    channels can be passed as plain numbers.
    """
    arr = np.atleast_1d(np.array(x, dtype=np.complex128))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if not allow_zero and not np.any(arr):
        raise ValueError(f"{name} must be a nonzero vector")
    return arr


def check_unit_norm(v, name="v_r", tol=UNIT_NORM_TOL):
    """Reject beamformers whose norm is not 1 within `tol`.

    Vectors are never silently renormalized.
    """
    v = as_complex_vector(v, name)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"{name} must have unit norm (got {norm!r}, tolerance {tol})")
    return v


def check_scalar(x, name, low=None, high=None, low_inclusive=True, high_inclusive=True):
    """Validate a finite real scalar against optional bounds and return it as float."""
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(x).__name__}")
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x}")
    if low is not None and (x < low or (x == low and not low_inclusive)):
        op = ">=" if low_inclusive else ">"
        raise ValueError(f"{name} must be {op} {low}, got {x}")
    if high is not None and (x > high or (x == high and not high_inclusive)):
        op = "<=" if high_inclusive else "<"
        raise ValueError(f"{name} must be {op} {high}, got {x}")
    return x


def check_positive_int(n, name):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"{name} must be >= 1, got {n}")
    return int(n)
