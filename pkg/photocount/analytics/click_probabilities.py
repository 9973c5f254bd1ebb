# photocount/analytics/click_probabilities.py
"""
PDC click probabilities averaged over transmittance pairs.

For each pair (eta_A, eta_B) the per-pair probabilities of same and of
different outcomes are evaluated in closed form and then averaged, which
is the channel average <...> as a sample mean. With double clicks the
squash assignment adds the half- and quarter-weighted double-click
patterns; without them only exactly one click per site is counted.

Pure calculation layer. No Django logic.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.exceptions import NumericalError
from photocount.analytics.pdc_coefficients import reduced_denominators, squeezing_terms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClickProbabilities:
    """
    Channel-averaged P_same and P_different.

    ``stderr`` is the standard error of the correlation coefficient built
    from them (delta method); all three errors vanish for a single pair.
    """

    p_same: float
    p_different: float
    stderr_same: float = 0.0
    stderr_different: float = 0.0
    stderr: float = 0.0


class ClickIntegrand:
    """
    Per-pair click probabilities for one (xi, detector, pairs) triple.

    Everything that does not depend on the analyzer angles is computed once,
    so the Bell optimizer can evaluate many angle settings on the same
    transmittance samples.
    """

    def __init__(self, xi, detector, pairs):
        pairs = np.atleast_2d(np.asarray(pairs, dtype=float))
        if pairs.size == 0 or pairs.shape[1] != 2:
            raise ValueError("pairs must be a non-empty sequence of (eta_A, eta_B)")
        if np.any(pairs < 0) or np.any(pairs > 1):
            raise ValueError("transmittances must lie in [0, 1]")

        self.pairs = pairs
        self.detector = detector
        t, u = squeezing_terms(xi)

        alpha = detector.eta_c * pairs[:, 0]
        beta = detector.eta_c * pairs[:, 1]
        pieces = reduced_denominators(t, u, alpha, beta)

        u_sq = u * u
        self._u = u
        self._denominators = pieces
        self._base = pieces["base"]
        self._weight = pieces["weight"]
        self._u_sq = u_sq

        nu = detector.nu
        with np.errstate(divide="ignore", invalid="ignore"):
            # Angle-independent terms
            self._dc_marginals = u_sq / pieces["g_a"] ** 2 + u_sq / pieces["g_b"] ** 2
            self._vacuum = u_sq / pieces["g_k"] ** 2
            self._nodc_marginals = math.exp(-3 * nu) * (
                u_sq / (pieces["g_k"] * pieces["g_a"]) + u_sq / (pieces["g_k"] * pieces["g_b"])
            )
        self._check("angle-independent terms", self._dc_marginals, self._vacuum, self._nodc_marginals)

    @property
    def size(self):
        return self.pairs.shape[0]

    def _check(self, what, *arrays):
        for values in arrays:
            if not np.all(np.isfinite(values)):
                bad = int(np.argmax(~np.isfinite(values)))
                raise NumericalError(
                    f"non-finite click-probability {what} for pair {tuple(self.pairs[bad])} "
                    f"(eta_c={self.detector.eta_c}, nu={self.detector.nu})"
                )

    def per_pair(self, delta_theta, include_double_clicks=True):
        """
        (p_same, p_different) arrays, one entry per transmittance pair.
        """
        cos_sq = math.cos(delta_theta) ** 2
        sin_sq = math.sin(delta_theta) ** 2
        nu = self.detector.nu

        with np.errstate(divide="ignore", invalid="ignore"):
            same = self._u_sq / (self._base + self._weight * cos_sq)
            different = self._u_sq / (self._base + self._weight * sin_sq)

        self._check(f"terms at delta_theta={delta_theta}", same, different)

        if include_double_clicks:
            scale = math.exp(-4 * nu) / 2
            shared = -math.exp(2 * nu) * self._dc_marginals + self._vacuum
            p_same = 0.5 + scale * (math.exp(2 * nu) * (2 * same - 2 * different) + shared)
            p_different = 0.5 + scale * (math.exp(2 * nu) * (2 * different - 2 * same) + shared)
        else:
            shared = -self._nodc_marginals + math.exp(-4 * nu) * self._vacuum
            p_same = 2 * (math.exp(-2 * nu) * same + shared)
            p_different = 2 * (math.exp(-2 * nu) * different + shared)

        return p_same, p_different

    def outcome_partition(self, delta_theta):
        """
        Joint law of how many detectors click at A and at B.

        Returns ``{(clicks_a, clicks_b): array}`` for clicks in {0, 1, 2},
        one entry per transmittance pair. Each cell follows by
        inclusion-exclusion from the probabilities that a set of detectors
        stays silent. Cell (1, 1) is the no-double-click p_same + p_different;
        the four cells with clicks on both sides sum to the squashed one.
        """
        nu = self.detector.nu
        u, u_sq = self._u, self._u_sq
        g_k, g_a, g_b = (self._denominators[key] for key in ("g_k", "g_a", "g_b"))

        with np.errstate(divide="ignore", invalid="ignore"):
            # One detector at A and one at B, summed over the four choices
            cross = 2 * math.exp(-2 * nu) * (
                u_sq / (self._base + self._weight * math.cos(delta_theta) ** 2)
                + u_sq / (self._base + self._weight * math.sin(delta_theta) ** 2)
            )
            single_a = math.exp(-nu) * u / g_a
            single_b = math.exp(-nu) * u / g_b
            site_a = math.exp(-2 * nu) * u_sq / g_a ** 2
            site_b = math.exp(-2 * nu) * u_sq / g_b ** 2
            # One detector at A with both at B, and the mirror image
            three_a = math.exp(-3 * nu) * u_sq / (g_k * g_b)
            three_b = math.exp(-3 * nu) * u_sq / (g_k * g_a)
            everything = math.exp(-4 * nu) * self._vacuum

        self._check(f"silence terms at delta_theta={delta_theta}", cross, single_a, single_b, three_a, three_b)

        cells = {(0, 0): everything}
        cells[(1, 0)] = 2 * (three_a - everything)
        cells[(0, 1)] = 2 * (three_b - everything)
        cells[(2, 0)] = site_b - everything - cells[(1, 0)]
        cells[(0, 2)] = site_a - everything - cells[(0, 1)]
        cells[(1, 1)] = cross - 4 * (three_a + three_b - everything)
        cells[(1, 2)] = 2 * (single_a - site_a) - cells[(1, 0)] - cells[(1, 1)]
        cells[(2, 1)] = 2 * (single_b - site_b) - cells[(0, 1)] - cells[(1, 1)]
        cells[(2, 2)] = (
            1 - 2 * (single_a + single_b) + site_a + site_b + cross
            - 2 * (three_a + three_b) + everything
        )
        return cells


def correlation_stderr(p_same, p_different):
    """
    Delta-method standard error of E = (S - D) / (S + D) from per-pair
    samples of S and D.
    """
    n = p_same.size
    if n < 2:
        return 0.0
    s, d = p_same.mean(), p_different.mean()
    total = s + d
    if total <= 0:
        return 0.0
    influence = (2 * d * p_same - 2 * s * p_different) / total ** 2
    return float(influence.std() / math.sqrt(n))


def pdc_click_probs(xi, detector, pairs, delta_theta, include_double_clicks=True):
    """
    Channel-averaged P_same and P_different for a PDC source.

    Raises
    ------
    NumericalError
        If the per-pair integrand is not finite.
    """
    integrand = pairs if isinstance(pairs, ClickIntegrand) else ClickIntegrand(xi, detector, pairs)
    p_same, p_different = integrand.per_pair(delta_theta, include_double_clicks)

    root_n = math.sqrt(p_same.size)
    return ClickProbabilities(
        p_same=float(p_same.mean()),
        p_different=float(p_different.mean()),
        stderr_same=float(p_same.std() / root_n),
        stderr_different=float(p_different.std() / root_n),
        stderr=correlation_stderr(p_same, p_different),
    )
