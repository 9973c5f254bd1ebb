# chsh/metrics/bell_calculator.py
"""
Correlation coefficients and the CHSH combination.

Pure calculation layer. No Django logic.
"""

import math
from dataclasses import dataclass

from core.exceptions import UndefinedCorrelationError

RECOMPUTE_TOLERANCE = 1e-12


def correlation(p_same, p_different):
    """
    E = (P_same - P_different) / (P_same + P_different).

    Raises
    ------
    UndefinedCorrelationError
        If no coincidence is possible (P_same + P_different = 0).
    """
    total = p_same + p_different
    if not total > 0:
        raise UndefinedCorrelationError(
            f"correlation undefined: P_same + P_different = {total!r}"
        )
    return (p_same - p_different) / total


def bell_parameter(e11, e12, e22, e21):
    """|E11 - E12| + |E22 + E21|; local models stay at or below 2."""
    return abs(e11 - e12) + abs(e22 + e21)


@dataclass(frozen=True)
class AngleSettings:
    """
    Analyzer angles (theta_A1, theta_B1, theta_A2, theta_B2), reduced mod pi.
    """

    theta_a1: float
    theta_b1: float
    theta_a2: float
    theta_b2: float

    def __post_init__(self):
        for name in ("theta_a1", "theta_b1", "theta_a2", "theta_b2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            reduced = value % math.pi
            object.__setattr__(self, name, 0.0 if reduced == math.pi else reduced)

    @classmethod
    def canonical(cls):
        return cls(0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8)

    @classmethod
    def from_differences(cls, deltas):
        """Angles (0, d1, d2, d3) as used by the optimizer."""
        d1, d2, d3 = deltas
        return cls(0.0, float(d1), float(d2), float(d3))

    def as_tuple(self):
        return (self.theta_a1, self.theta_b1, self.theta_a2, self.theta_b2)

    def differences(self):
        """
        theta_A - theta_B for (E11, E12, E22, E21), in that order.
        """
        return (
            self.theta_a1 - self.theta_b1,
            self.theta_a1 - self.theta_b2,
            self.theta_a2 - self.theta_b2,
            self.theta_a2 - self.theta_b1,
        )


@dataclass(frozen=True)
class BellResult:
    """
    Maximized Bell parameter with the settings that reach it.

    ``correlations`` holds (E11, E12, E22, E21); ``canonical_value`` is the
    Bell parameter at the canonical settings on the same samples.
    """

    bell_value: float
    settings: AngleSettings
    correlations: tuple
    stderr: float = 0.0
    canonical_value: float = None

    def __post_init__(self):
        if len(self.correlations) != 4:
            raise ValueError("correlations must hold (E11, E12, E22, E21)")
        if self.stderr < 0 or not math.isfinite(self.stderr):
            raise ValueError(f"stderr must be a finite value >= 0, got {self.stderr}")
        recomputed = bell_parameter(*self.correlations)
        if abs(recomputed - self.bell_value) > RECOMPUTE_TOLERANCE:
            raise ValueError(
                f"bell_value {self.bell_value!r} does not match correlations ({recomputed!r})"
            )

    @property
    def violates(self):
        return self.bell_value > 2
