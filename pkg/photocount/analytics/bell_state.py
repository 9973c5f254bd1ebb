# photocount/analytics/bell_state.py
"""
Closed forms for the weak-intensity (Bell-state) source.

After the channels the pair is in a mixture of vacuum (p0), one surviving
photon (p1) and the intact Bell state (pB). Correlations and the CHSH
value then depend on the channel only through these three numbers.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from atmosphere.channels.transmittance_models import (
    Copropagating,
    Counterpropagating,
    is_deterministic,
)
from atmosphere.services.pdt_service import sample_pairs
from core.exceptions import UndefinedCorrelationError

logger = logging.getLogger(__name__)

PARTITION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BellChannelProbs:
    """
    p0: no photon arrives; p1: exactly one arrives; pB: both arrive.

    ``covariance`` is the 2x2 covariance of the (pB, p0) estimates; zero
    for exact values.
    """

    p0: float
    p1: float
    pB: float
    covariance: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)), compare=False)

    def __post_init__(self):
        for name in ("p0", "p1", "pB"):
            value = getattr(self, name)
            if not -PARTITION_TOLERANCE <= value <= 1 + PARTITION_TOLERANCE:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if abs(self.p0 + self.p1 + self.pB - 1) > PARTITION_TOLERANCE:
            raise ValueError(
                f"p0 + p1 + pB must equal 1, got {self.p0 + self.p1 + self.pB!r}"
            )


def _from_moments(pB, p0, covariance=None):
    p1 = 1.0 - p0 - pB
    kwargs = {} if covariance is None else {"covariance": covariance}
    return BellChannelProbs(p0=p0, p1=max(p1, 0.0), pB=pB, **kwargs)


def factorized_bell_channel_probs(mean_a, mean_b):
    """p0, p1, pB for independent arms, from the channel means alone."""
    return _from_moments(mean_a * mean_b, (1 - mean_a) * (1 - mean_b))


def bell_channel_probs(scenario, count, seed):
    """
    pB = <eta_A eta_B>, p0 = <(1 - eta_A)(1 - eta_B)>, p1 = 1 - p0 - pB.

    Deterministic scenarios are exact; otherwise the moments come from
    sample_pairs(scenario, count, seed).
    """
    if is_deterministic(scenario):
        if isinstance(scenario, Copropagating):
            eta_a = eta_b = scenario.model.eta0
        elif isinstance(scenario, Counterpropagating):
            eta_a, eta_b = scenario.model_a.eta0, scenario.model_b.eta0
        return factorized_bell_channel_probs(eta_a, eta_b)

    pairs = sample_pairs(scenario, count, seed)
    both = pairs[:, 0] * pairs[:, 1]
    neither = (1 - pairs[:, 0]) * (1 - pairs[:, 1])

    pB = float(both.mean())
    p0 = float(neither.mean())
    p1_direct = float(np.mean(pairs[:, 0] * (1 - pairs[:, 1]) + pairs[:, 1] * (1 - pairs[:, 0])))
    if abs(p1_direct - (1 - p0 - pB)) > 1e-9:
        logger.warning(f"single-photon probability mismatch: direct {p1_direct!r} vs remainder {1 - p0 - pB!r}")

    covariance = np.zeros((2, 2))
    if both.size > 1:
        covariance = np.cov(np.vstack([both, neither])) / both.size
    return _from_moments(pB, p0, covariance)


def _denominator(probs, detector, include_double_clicks):
    eta_c, nu = detector.eta_c, detector.nu

    if include_double_clicks:
        noise = math.expm1(2 * nu)
        return (
            probs.pB * (noise + eta_c) ** 2
            + probs.p0 * noise ** 2
            + probs.p1 * noise * (noise + eta_c)
        )

    noise = math.expm1(nu)
    e_nu = math.exp(nu)
    return (
        probs.pB * ((1 - eta_c) * (e_nu - 2) + e_nu) ** 2
        + 2 * probs.p1 * noise * (eta_c * e_nu + 2 * noise * (1 - eta_c))
        + 4 * probs.p0 * noise ** 2
    )


def _amplitude(probs, detector, include_double_clicks):
    """Coefficient c with E(theta_A, theta_B) = -c * cos 2(theta_A - theta_B)."""
    numerator = probs.pB * detector.eta_c ** 2 * math.exp(2 * detector.nu)
    if numerator == 0:
        return 0.0
    return numerator / _denominator(probs, detector, include_double_clicks)


def bell_state_correlation(probs, detector, theta_a, theta_b, include_double_clicks=True):
    """
    E(theta_A, theta_B) for the Bell-state source.

    Raises
    ------
    UndefinedCorrelationError
        If no click pattern contributes (pB = 0 and nu = 0).
    """
    if _denominator(probs, detector, include_double_clicks) == 0:
        raise UndefinedCorrelationError("Bell-state correlation undefined: no coincidences possible")
    return -_amplitude(probs, detector, include_double_clicks) * math.cos(2 * (theta_a - theta_b))


def bell_state_bell_parameter(probs, detector, include_double_clicks=True):
    """CHSH value at the canonical angles (0, pi/8, pi/4, 3pi/8)."""
    return 2 * math.sqrt(2) * _amplitude(probs, detector, include_double_clicks)


def bell_state_bell_parameter_stderr(probs, detector, include_double_clicks=True):
    """
    Delta-method standard error of bell_state_bell_parameter from the
    covariance of the (pB, p0) estimates. Zero for exact probabilities.
    """
    if not np.any(probs.covariance):
        return 0.0
    denominator = _denominator(probs, detector, include_double_clicks)
    if denominator == 0:
        return 0.0

    # The denominator is linear in (pB, p0, p1)
    weight_b, weight_0, weight_1 = (
        _denominator(BellChannelProbs(p0=p0, p1=p1, pB=pB), detector, include_double_clicks)
        for pB, p0, p1 in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    )
    gain = detector.eta_c ** 2 * math.exp(2 * detector.nu)
    numerator = probs.pB * gain

    gradient = 2 * math.sqrt(2) * np.array([
        gain / denominator - numerator * (weight_b - weight_1) / denominator ** 2,
        -numerator * (weight_0 - weight_1) / denominator ** 2,
    ])
    return float(math.sqrt(max(gradient @ probs.covariance @ gradient, 0.0)))
