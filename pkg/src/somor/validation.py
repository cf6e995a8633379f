"""Input validation helpers shared by the public functions and estimators."""

import numbers

import numpy as np

from .exceptions import DimensionMismatch, InvalidParameter, ValidationError


def check_matrix(a, name="matrix", *, allow_empty=False, dtype=float, square=False):
    """Convert `a` to a finite 2-D array.

    Scalars become 1x1 and 1-D input becomes a column. With
    ``allow_empty=True`` a zero-column (or zero-row) matrix is accepted,
    which is how absent initial-condition bases are represented.
    """
    arr = np.asarray(a, dtype=dtype)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got {arr.ndim} dimensions")
    if not allow_empty and 0 in arr.shape:
        raise ValidationError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_vector(v, name="vector", size=None):
    arr = np.atleast_1d(np.asarray(v, dtype=float)).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    if size is not None and arr.size != size:
        raise DimensionMismatch(f"{name} has length {arr.size}, expected {size}")
    return arr


def check_rows(a, b, a_name, b_name):
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"{a_name} vs {b_name}: {a_name} has {a.shape[0]} rows, "
            f"{b_name} has {b.shape[0]}")


def check_order_spec(order, name="order"):
    """Validate an order specification.

    An integer is an explicit reduced order, a float in (0, 1] a relative
    truncation tolerance on the Hankel singular values.
    """
    if isinstance(order, bool):
        raise InvalidParameter(f"{name} must be an int or a float, got bool")
    if isinstance(order, numbers.Integral):
        if order < 0:
            raise InvalidParameter(f"{name} must be nonnegative, got {order}")
        return int(order)
    if isinstance(order, numbers.Real):
        if not 0.0 < order <= 1.0:
            raise InvalidParameter(
                f"relative tolerance {name} must lie in (0, 1], got {order}")
        return float(order)
    raise InvalidParameter(f"{name} must be an int or a float, got {order!r}")


def symmetrize(a):
    return 0.5 * (a + a.T)
