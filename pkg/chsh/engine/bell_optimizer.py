# chsh/engine/bell_optimizer.py
"""
Maximizes the Bell parameter over the analyzer angles.

Transmittance pairs are drawn once per optimizer and reused for every
angle setting, so the objective is a smooth deterministic function of the
angles and Nelder-Mead does not chase sampling noise.
"""

import logging
import math

import numpy as np
from django.conf import settings
from scipy import optimize

from atmosphere.channels.transmittance_models import is_deterministic
from atmosphere.services.pdt_service import sample_pairs
from chsh.metrics.bell_calculator import AngleSettings, BellResult, bell_parameter, correlation
from photocount.analytics.bell_state import (
    bell_channel_probs,
    bell_state_bell_parameter_stderr,
    bell_state_correlation,
)
from photocount.analytics.click_probabilities import ClickIntegrand
from photocount.sources import BellState, Pdc

logger = logging.getLogger(__name__)

ANGLE_TOLERANCE = 1e-6
MAX_EVALUATIONS = 500
RESTART_STEPS = (0.1, 0.05, 0.025)

TSIRELSON_BOUND = 2 * math.sqrt(2)


def _signs(correlations):
    """d bell_parameter / d E for (E11, E12, E22, E21)."""
    e11, e12, e22, e21 = correlations
    first = math.copysign(1.0, e11 - e12)
    second = math.copysign(1.0, e22 + e21)
    return (first, -first, second, second)


class BellOptimizer:
    """
    Evaluates and maximizes the Bell parameter for one
    (source, scenario, detector) combination.

    Only angle differences theta_A - theta_B enter the correlations, so
    the search runs over (0, d1, d2, d3) starting from the canonical
    settings.
    """

    def __init__(self, source, scenario, detector, include_double_clicks=True, count=None, seed=None):
        self.source = source
        self.scenario = scenario
        self.detector = detector
        self.include_double_clicks = include_double_clicks
        self.count = settings.BELLSIM_DEFAULT_SAMPLES if count is None else count
        self.seed = settings.BELLSIM_DEFAULT_SEED if seed is None else seed

        if isinstance(source, BellState):
            self._probs = bell_channel_probs(scenario, self.count, self.seed)
            self._integrand = None
        elif isinstance(source, Pdc):
            # A deterministic scenario has a single pair
            count = 1 if is_deterministic(scenario) else self.count
            pairs = sample_pairs(scenario, count, self.seed)
            self._integrand = ClickIntegrand(source.xi, detector, pairs)
            self._probs = None
        else:
            raise TypeError(f"unknown source {source!r}")

        self.evaluations = 0

    # ==========================================================
    # SINGLE SETTING
    # ==========================================================

    def _pdc_terms(self, angles):
        terms = [
            self._integrand.per_pair(delta, self.include_double_clicks)
            for delta in angles.differences()
        ]
        correlations = tuple(
            correlation(float(same.mean()), float(different.mean()))
            for same, different in terms
        )
        return correlations, terms

    def _pdc_stderr(self, correlations, terms):
        n = self._integrand.size
        if n < 2:
            return 0.0

        influence = np.zeros(n)
        for sign, (same, different) in zip(_signs(correlations), terms):
            s, d = same.mean(), different.mean()
            influence += sign * (2 * d * same - 2 * s * different) / (s + d) ** 2
        return float(influence.std() / math.sqrt(n))

    def _bell_state_correlations(self, angles):
        return tuple(
            bell_state_correlation(self._probs, self.detector, delta, 0.0, self.include_double_clicks)
            for delta in angles.differences()
        )

    def value(self, angles):
        """Bell parameter at the given settings, without its error."""
        self.evaluations += 1
        if self._integrand is None:
            return bell_parameter(*self._bell_state_correlations(angles))
        return bell_parameter(*self._pdc_terms(angles)[0])

    def evaluate(self, angles, canonical_value=None):
        """BellResult at the given settings, with its standard error."""
        self.evaluations += 1
        if self._integrand is None:
            correlations = self._bell_state_correlations(angles)
            bell_value = bell_parameter(*correlations)
            # B scales linearly with the closed-form amplitude
            canonical_stderr = bell_state_bell_parameter_stderr(
                self._probs, self.detector, self.include_double_clicks
            )
            canonical = bell_parameter(*self._bell_state_correlations(AngleSettings.canonical()))
            stderr = canonical_stderr * bell_value / canonical if canonical > 0 else 0.0
        else:
            correlations, terms = self._pdc_terms(angles)
            bell_value = bell_parameter(*correlations)
            stderr = self._pdc_stderr(correlations, terms)

        return BellResult(
            bell_value=bell_value,
            settings=angles,
            correlations=correlations,
            stderr=stderr,
            canonical_value=canonical_value,
        )

    # ==========================================================
    # MAXIMIZATION
    # ==========================================================

    def _search(self, start, step):
        simplex = np.vstack([start, start + step * np.eye(3)])
        result = optimize.minimize(
            lambda deltas: -self.value(AngleSettings.from_differences(deltas)),
            x0=start,
            method="Nelder-Mead",
            options=dict(
                xatol=ANGLE_TOLERANCE,
                fatol=1e-14,
                maxfev=MAX_EVALUATIONS,
                initial_simplex=simplex,
            ),
        )
        logger.debug(f"Nelder-Mead step={step}: B={-result.fun!r} after {result.nfev} evaluations")
        return np.asarray(result.x, dtype=float)

    def maximize(self):
        """
        BellResult at the best settings found.

        Bell-state sources are answered at the canonical settings, which
        are optimal for them. For PDC sources the canonical settings are
        always a candidate, so the result never falls below them.
        """
        canonical = AngleSettings.canonical()
        canonical_value = self.value(canonical)

        if self._integrand is None:
            return self.evaluate(canonical, canonical_value=canonical_value)

        candidates = [canonical]
        start = np.array(canonical.as_tuple()[1:])
        for step in RESTART_STEPS:
            start = self._search(start, step)
            candidates.append(AngleSettings.from_differences(start))

        scored = [(self.value(angles), angles) for angles in candidates]
        best_value, best = min(scored, key=lambda item: (-item[0], item[1].as_tuple()))

        logger.debug(
            f"maximize_bell: B={best_value!r} (canonical {canonical_value!r}) "
            f"after {self.evaluations} evaluations"
        )
        return self.evaluate(best, canonical_value=canonical_value)


def maximize_bell(source, scenario, detector, include_double_clicks=True, count=None, seed=None):
    """
    Maximized Bell parameter for a source sent through a channel scenario.

    Raises
    ------
    NumericalError
        If click probabilities or correlations cannot be evaluated.
    """
    optimizer = BellOptimizer(source, scenario, detector, include_double_clicks, count, seed)
    return optimizer.maximize()
