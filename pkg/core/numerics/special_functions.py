# core/numerics/special_functions.py
"""
Special functions for the elliptic-beam transmittance.

Pure calculation layer. No Django logic.

Every function accepts a scalar or an array and returns the same shape
(a plain ``float`` for scalar input).
"""

import numpy as np
from scipy import special

from core.exceptions import DomainError, SpecialFunctionOverflow

BRANCH_POINT = -np.exp(-1.0)
DOMAIN_SLACK = 1e-12

# Largest y with exp(y) representable in float64
EXP_LIMIT = float(np.log(np.finfo(float).max))

# Halley iteration in scipy stops on |dw| < tol * |w|
_LAMBERT_TOL = 1e-15

# Newton steps for W0(exp(y)) at large y; the error is squared each step
_LOG_NEWTON_STEPS = 6


def _as_output(values, original):
    if np.ndim(original) == 0:
        return float(values)
    return values


def _require_finite(x_arr, name):
    if not np.all(np.isfinite(x_arr)):
        raise DomainError(f"{name} requires finite arguments")


# ----------------------------------------------------------
# Lambert W (principal branch)
# ----------------------------------------------------------

def lambert_w0(x):
    """
    Principal branch W0 of the Lambert W function, w * exp(w) = x.

    Arguments down to -1/e - 1e-12 are accepted; the slack below the branch
    point is clamped onto it.

    Raises
    ------
    DomainError
        For x < -1/e - 1e-12 or non-finite x.
    """
    x_arr = np.asarray(x, dtype=float)
    _require_finite(x_arr, "lambert_w0")

    if np.any(x_arr < BRANCH_POINT - DOMAIN_SLACK):
        raise DomainError(
            f"lambert_w0 is undefined below -1/e (got min {x_arr.min()!r})"
        )

    clamped = np.maximum(x_arr, BRANCH_POINT)
    w = special.lambertw(clamped, k=0, tol=_LAMBERT_TOL).real
    return _as_output(w, x)


# ----------------------------------------------------------
# Modified Bessel functions of the first kind
# ----------------------------------------------------------

def scaled_bessel_i0(x):
    """exp(-|x|) * I0(x); finite for every finite x."""
    x_arr = np.asarray(x, dtype=float)
    _require_finite(x_arr, "scaled_bessel_i0")
    return _as_output(special.i0e(x_arr), x)


def scaled_bessel_i1(x):
    """exp(-|x|) * I1(x); finite for every finite x."""
    x_arr = np.asarray(x, dtype=float)
    _require_finite(x_arr, "scaled_bessel_i1")
    return _as_output(special.i1e(x_arr), x)


def _unscale(scaled, x_arr, name):
    magnitude = np.abs(x_arr)
    with np.errstate(divide="ignore"):
        log_value = np.log(np.abs(scaled)) + magnitude
    if np.any(log_value >= EXP_LIMIT):
        raise SpecialFunctionOverflow(
            f"{name} overflows float64 for |x| = {magnitude.max()!r}"
        )
    return scaled * np.exp(magnitude)


def bessel_i0(x):
    """
    Modified Bessel function I0.

    Evaluated as exp(|x|) * i0e(x) so the only failure mode is a genuine
    overflow of the result, which is raised as SpecialFunctionOverflow.
    """
    x_arr = np.asarray(x, dtype=float)
    _require_finite(x_arr, "bessel_i0")
    return _as_output(_unscale(special.i0e(x_arr), x_arr, "bessel_i0"), x)


def bessel_i1(x):
    """Modified Bessel function I1 (odd in x)."""
    x_arr = np.asarray(x, dtype=float)
    _require_finite(x_arr, "bessel_i1")
    return _as_output(_unscale(special.i1e(x_arr), x_arr, "bessel_i1"), x)


def lambert_w0_of_exp(y):
    """
    W0(exp(y)) without forming exp(y).

    Below the float64 exp range this is lambert_w0(exp(y)); above it, w
    solves w + ln(w) = y and is found by Newton iteration from
    w = y - ln(y).
    """
    y_arr = np.asarray(y, dtype=float)
    _require_finite(y_arr, "lambert_w0_of_exp")

    large = y_arr > EXP_LIMIT - 1
    direct = special.lambertw(np.exp(np.where(large, 0.0, y_arr)), k=0, tol=_LAMBERT_TOL).real

    big = np.where(large, y_arr, EXP_LIMIT)
    w = big - np.log(big)
    for _ in range(_LOG_NEWTON_STEPS):
        w = w - (w + np.log(w) - big) / (1 + 1 / w)

    return _as_output(np.where(large, w, direct), y)
