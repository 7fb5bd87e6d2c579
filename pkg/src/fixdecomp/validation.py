"""Input validation helpers shared by the library and the estimator facade.

All helpers return a validated ``numpy`` array (converting where needed) or
raise one of the package errors; they never silently reshape data.
"""
from __future__ import annotations

import numbers

import numpy as np

from .errors import (
    DegenerateShapeError,
    FamilySizeMismatchError,
    InvalidParameterError,
    ShapeMismatchError,
)

MIN_SIDE = 2


def check_grid(a, name="grid"):
    """Validate a real 2-D grid: finite entries, both sides >= 2."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-D, got shape {a.shape}")
    if min(a.shape) < MIN_SIDE:
        raise DegenerateShapeError(f"{name} sides must be >= {MIN_SIDE}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError(f"{name} contains non-finite entries")
    return a


def check_symbol(a, name="symbol"):
    """Validate a complex 2-D spectral symbol."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-D, got shape {a.shape}")
    if min(a.shape) < MIN_SIDE:
        raise DegenerateShapeError(f"{name} sides must be >= {MIN_SIDE}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError(f"{name} contains non-finite entries")
    return a


def check_family(a, name="family"):
    """Validate a real grid family stacked as (members, n, m)."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        raise ShapeMismatchError(f"{name} must be 3-D (members, n, m), got shape {a.shape}")
    if a.shape[0] < 1:
        raise FamilySizeMismatchError(f"{name} must have at least one member")
    if min(a.shape[1:]) < MIN_SIDE:
        raise DegenerateShapeError(f"{name} grid sides must be >= {MIN_SIDE}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError(f"{name} contains non-finite entries")
    return a


def check_bank(a, name="bank"):
    """Validate a complex filter bank stacked as (members, n, m)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 3:
        raise ShapeMismatchError(f"{name} must be 3-D (members, n, m), got shape {a.shape}")
    if a.shape[0] < 1:
        raise FamilySizeMismatchError(f"{name} must have at least one member")
    if min(a.shape[1:]) < MIN_SIDE:
        raise DegenerateShapeError(f"{name} grid sides must be >= {MIN_SIDE}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError(f"{name} contains non-finite entries")
    return a


def check_same_shape(a, b, name_a="first", name_b="second"):
    if a.shape != b.shape:
        raise ShapeMismatchError(
            f"{name_a} shape {a.shape} does not match {name_b} shape {b.shape}"
        )


def check_bank_family(bank, family):
    """Validate that a bank can act member-wise on a family."""
    if bank.shape[0] != family.shape[0]:
        raise FamilySizeMismatchError(
            f"bank has {bank.shape[0]} members, family has {family.shape[0]}"
        )
    if bank.shape[1:] != family.shape[1:]:
        raise ShapeMismatchError(
            f"bank grid shape {bank.shape[1:]} does not match family {family.shape[1:]}"
        )


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be a finite positive number, got {value!r}")
    return float(value)


def check_kappa(kappa):
    if kappa not in (1, 2):
        raise InvalidParameterError(f"kappa must be 1 or 2, got {kappa!r}")
    return int(kappa)


def check_image(x, name="image"):
    """Validate a single image for the estimator API (2-D real, finite)."""
    return check_grid(x, name=name)
