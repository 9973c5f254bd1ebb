# photocount/sources.py
"""
Light sources and detectors of the Bell test.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DetectorParams:
    """
    On/off detectors shared by all four receivers.

    eta_c: detection efficiency in (0, 1].
    nu: mean number of stray-light and dark counts per detector per pulse.
    """

    eta_c: float
    nu: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.eta_c) and 0 < self.eta_c <= 1):
            raise ValueError(f"eta_c must be in (0, 1], got {self.eta_c}")
        if not (math.isfinite(self.nu) and self.nu >= 0):
            raise ValueError(f"nu must be >= 0, got {self.nu}")


@dataclass(frozen=True)
class Pdc:
    """Polarization-entangled parametric down-conversion with squeezing xi."""

    xi: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi >= 0):
            raise ValueError(f"xi must be a finite value >= 0, got {self.xi}")

    @property
    def kind(self):
        return "pdc"


@dataclass(frozen=True)
class BellState:
    """Weak-intensity limit of the PDC source: one photon pair in a Bell state."""

    @property
    def kind(self):
        return "bell"
