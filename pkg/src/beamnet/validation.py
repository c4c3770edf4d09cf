"""Small argument checks shared by the public API."""

import math
import numbers

import numpy as np

from .exceptions import DomainError

TWO_PI = 2.0 * math.pi


def check_scalar(value, name, *, low=None, high=None, low_open=False,
                 high_open=False, exc=DomainError):
    """Return ``value`` as float after checking it lies in the given interval.

    Bounds are inclusive unless the matching ``*_open`` flag is set.
    """
    if isinstance(value, bool) or not isinstance(value, (numbers.Real, np.floating, np.integer)):
        raise exc(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise exc(f"{name} must be finite, got {value!r}")
    if low is not None:
        if (low_open and value <= low) or (not low_open and value < low):
            op = ">" if low_open else ">="
            raise exc(f"{name} must be {op} {low}, got {value!r}")
    if high is not None:
        if (high_open and value >= high) or (not high_open and value > high):
            op = "<" if high_open else "<="
            raise exc(f"{name} must be {op} {high}, got {value!r}")
    return value


def check_probability(value, name="probability", *, open_interval=False):
    return check_scalar(value, name, low=0.0, high=1.0,
                        low_open=open_interval, high_open=open_interval)


def check_alpha(alpha):
    # the interference constant diverges at alpha <= 2
    return check_scalar(alpha, "alpha", low=2.0, low_open=True)


def wrap_angle(theta):
    """Wrap angles into [-pi, pi)."""
    return np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi


def as_1d_array(x, name="x"):
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional")
    return arr
