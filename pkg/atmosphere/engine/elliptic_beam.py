# atmosphere/engine/elliptic_beam.py
"""
Elliptic-beam transmittance
---------------------------

Maps one beam realization to the fraction of power collected by a circular
aperture of radius a:

    v = (x0, y0, Theta1, Theta2), chi
        ↓
    semi-axes  W_i^2 = W0^2 exp(Theta_i)
        ↓
    effective spot radius W_eff (Lambert W)
        ↓
    centred transmittance eta0(Theta1, Theta2)
        ↓
    eta = eta_m * eta0 * exp(-[(r0/a) / R]^lambda)

R and lambda are the scale and shape functions of the beam-wandering
fit. Both depend on their argument only through z = a^2 xi^2, and only the
combination R^(-lambda) = ln(...) enters the exponent, which stays finite
as xi -> 0 where R itself diverges.

Every function is vectorized over the sample axis.
"""

import numpy as np

from core.exceptions import TransmittanceEvaluationError
from core.numerics import lambert_w0_of_exp, scaled_bessel_i0, scaled_bessel_i1

# Below this z the shape and scale functions switch to their series
SERIES_THRESHOLD = 1e-3

# Semi-axes closer than this in Theta are treated as a circular beam
CIRCULAR_TOLERANCE = 1e-9


def _shape_and_log_scale(z):
    """
    Returns (lambda, L) with L = ln[2(1 - e^{-z/2}) / (1 - e^{-z} I0(z))],
    so that R = L^(-1/lambda).
    """
    z = np.asarray(z, dtype=float)
    small = z < SERIES_THRESHOLD
    safe = np.where(small, 1.0, z)

    deficit = 1.0 - scaled_bessel_i0(safe)
    half_loss = -np.expm1(-safe / 2)
    log_scale = np.log(2 * half_loss / deficit)
    shape = 2 * safe * scaled_bessel_i1(safe) / deficit / log_scale

    series_log_scale = z / 2 - z ** 2 / 8 + z ** 3 / 96
    shape = np.where(small, 2.0, shape)
    log_scale = np.where(small, series_log_scale, log_scale)
    return shape, log_scale


def shape_function(xi, aperture):
    """lambda(xi) for an aperture of radius ``aperture``."""
    shape, _ = _shape_and_log_scale(aperture ** 2 * np.asarray(xi, dtype=float) ** 2)
    return float(shape) if np.ndim(xi) == 0 else shape


def scale_function(xi, aperture):
    """R(xi); infinite at xi = 0."""
    shape, log_scale = _shape_and_log_scale(aperture ** 2 * np.asarray(xi, dtype=float) ** 2)
    with np.errstate(divide="ignore"):
        scale = log_scale ** (-1.0 / shape)
    return float(scale) if np.ndim(xi) == 0 else scale


def _wandering_factor(ratio, z):
    """exp(-[ratio / R]^lambda) written as exp(-ratio^lambda * L)."""
    shape, log_scale = _shape_and_log_scale(z)
    return np.exp(-(ratio ** shape) * log_scale)


def effective_spot_radius_sq(w1_sq, w2_sq, chi, aperture):
    """
    W_eff^2 as a function of the semi-axes and the ellipse orientation.

    The Lambert W argument is handled through its logarithm, which stays
    finite for beams much narrower than the aperture.
    """
    a_sq = aperture ** 2
    log_argument = (
        np.log(4 * a_sq / np.sqrt(w1_sq * w2_sq))
        + a_sq / w1_sq * (1 + 2 * np.cos(chi) ** 2)
        + a_sq / w2_sq * (1 + 2 * np.sin(chi) ** 2)
    )
    if not np.all(np.isfinite(log_argument)):
        raise TransmittanceEvaluationError("effective spot radius: non-finite Lambert W argument")
    return 4 * a_sq / lambert_w0_of_exp(log_argument)


def centered_transmittance(w1_sq, w2_sq, aperture):
    """eta0(Theta1, Theta2): transmittance of the ellipse centred on the aperture."""
    a_sq = aperture ** 2
    p = a_sq / w1_sq
    q = a_sq / w2_sq

    # I0(p - q) exp(-(p + q)) in scaled form
    circular_part = scaled_bessel_i0(np.abs(p - q)) * np.exp(-2 * np.minimum(p, q))

    w1 = np.sqrt(w1_sq)
    w2 = np.sqrt(w2_sq)
    inverse_gap = 1 / w1 - 1 / w2
    z = a_sq * inverse_gap ** 2

    circular = np.abs(np.log(w1_sq) - np.log(w2_sq)) < CIRCULAR_TOLERANCE
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(circular, 0.0, (w1 + w2) ** 2 / np.abs(w1_sq - w2_sq))
        elliptic_part = -2 * np.expm1(-z / 2) * _wandering_factor(ratio, z)
    elliptic_part = np.where(circular, 0.0, elliptic_part)

    return 1 - circular_part - elliptic_part


def elliptic_transmittance(v, chi, channel):
    """
    eta_m * eta(v, chi) for one or many realizations.

    ``v`` has shape (4,) or (n, 4) holding (x0, y0, Theta1, Theta2);
    ``chi`` is a scalar or an array of length n. The result is clipped to
    [0, 1].

    Raises
    ------
    TransmittanceEvaluationError
        If any intermediate is non-finite.
    """
    v_arr = np.asarray(v, dtype=float)
    scalar = v_arr.ndim == 1
    v_arr = np.atleast_2d(v_arr)
    chi_arr = np.broadcast_to(np.asarray(chi, dtype=float), (v_arr.shape[0],))

    if not (np.all(np.isfinite(v_arr)) and np.all(np.isfinite(chi_arr))):
        raise TransmittanceEvaluationError("beam parameters must be finite")

    x0, y0, theta1, theta2 = v_arr.T
    w0_sq = channel.beam_waist ** 2

    with np.errstate(over="raise"):
        try:
            w1_sq = w0_sq * np.exp(theta1)
            w2_sq = w0_sq * np.exp(theta2)
        except FloatingPointError as exc:
            raise TransmittanceEvaluationError(f"beam semi-axis overflow: {exc}") from exc
    if np.any(w1_sq <= 0) or np.any(w2_sq <= 0):
        raise TransmittanceEvaluationError("beam semi-axis underflows to zero")

    with np.errstate(over="ignore", under="ignore"):
        eta0 = centered_transmittance(w1_sq, w2_sq, channel.aperture)

        w_eff_sq = effective_spot_radius_sq(w1_sq, w2_sq, chi_arr, channel.aperture)
        z = 4 * channel.aperture ** 2 / w_eff_sq
        ratio = np.hypot(x0, y0) / channel.aperture
        eta = channel.eta_m * eta0 * _wandering_factor(ratio, z)

    if not np.all(np.isfinite(eta)):
        raise TransmittanceEvaluationError(
            f"non-finite transmittance for {int(np.sum(~np.isfinite(eta)))} realizations"
        )

    eta = np.clip(eta, 0.0, 1.0)
    return float(eta[0]) if scalar else eta
