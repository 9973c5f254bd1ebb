# fockoracle/services/validation_service.py
"""
Compares the closed-form PDC click probabilities with the Fock oracle
on a grid of fixed transmittances.

The expensive stages are shared along the grid: one truncated state per
xi, one lossy density per transmittance pair, one analyzed density per
angle. Detector settings and the double-click flag only change the
cheap detection step.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import pandas as pd

from fockoracle.engine.fock_state import build_pdc_state
from fockoracle.engine.oracle_engine import analyzed_density, lossy_density
from fockoracle.processors.detection import click_pattern_probs, same_and_different, squash
from photocount.analytics.click_probabilities import pdc_click_probs
from photocount.sources import DetectorParams

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6

REPORT_COLUMNS = [
    "xi", "eta_c", "nu", "eta_a", "eta_b", "delta_theta", "double_clicks",
    "closed_same", "closed_different", "oracle_same", "oracle_different",
    "deviation", "passed",
]


@dataclass(frozen=True)
class ValidationGrid:
    xi: tuple = (0.05, 0.1, 0.2)
    eta_c: tuple = (0.3, 0.6)
    nu: tuple = (0.0, 1e-3)
    transmittances: tuple = ((1.0, 1.0), (0.7, 0.3), (0.1, 0.1))
    delta_theta: tuple = (0.0, math.pi / 8, math.pi / 4)
    tolerance: float = DEFAULT_TOLERANCE
    n_max: int = None
    closed_form_eta_c_shift: float = 0.0

    def __post_init__(self):
        for name in ("xi", "eta_c", "nu", "transmittances", "delta_theta"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"validation grid '{name}' must not be empty")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")

    @property
    def size(self):
        return (
            len(self.xi) * len(self.eta_c) * len(self.nu)
            * len(self.transmittances) * len(self.delta_theta)
        )


class OracleValidationService:
    """
    Runs the oracle comparison. ``double_click_modes`` lists the variants
    to compare (True: with double clicks squashed, False: discarded).
    """

    def __init__(self, grid=None, double_click_modes=(True, False), tail_tolerance=None, workers=1):
        self.grid = grid or ValidationGrid()
        self.double_click_modes = tuple(double_click_modes)
        self.tail_tolerance = tail_tolerance
        self.workers = max(int(workers), 1)

    def _closed_form(self, xi, detector, eta_a, eta_b, delta_theta, include_double_clicks):
        shifted = DetectorParams(
            min(detector.eta_c + self.grid.closed_form_eta_c_shift, 1.0), detector.nu
        )
        probs = pdc_click_probs(xi, shifted, [(eta_a, eta_b)], delta_theta, include_double_clicks)
        return probs.p_same, probs.p_different

    def _rows_for_xi(self, xi):
        """
        Raises
        ------
        CutoffTooSmallError
            If the state cannot be truncated within tolerance.
        """
        grid = self.grid
        state = build_pdc_state(xi, grid.n_max, self.tail_tolerance)
        rows = []

        for eta_a, eta_b in grid.transmittances:
            density = lossy_density(state, eta_a, eta_b)
            for delta_theta in grid.delta_theta:
                analyzed = analyzed_density(density, delta_theta, 0.0)
                for eta_c, nu in itertools.product(grid.eta_c, grid.nu):
                    detector = DetectorParams(eta_c, nu)
                    patterns = click_pattern_probs(analyzed, detector)
                    for flag in self.double_click_modes:
                        oracle_same, oracle_different = same_and_different(squash(patterns, flag))
                        closed_same, closed_different = self._closed_form(
                            xi, detector, eta_a, eta_b, delta_theta, flag
                        )
                        deviation = max(
                            abs(closed_same - oracle_same), abs(closed_different - oracle_different)
                        )
                        rows.append({
                            "xi": xi,
                            "eta_c": eta_c,
                            "nu": nu,
                            "eta_a": eta_a,
                            "eta_b": eta_b,
                            "delta_theta": delta_theta,
                            "double_clicks": flag,
                            "closed_same": closed_same,
                            "closed_different": closed_different,
                            "oracle_same": oracle_same,
                            "oracle_different": oracle_different,
                            "deviation": deviation,
                            "passed": deviation <= grid.tolerance,
                        })

        logger.info(f"oracle xi={xi}: n_max={state.cutoff}, {len(rows)} comparisons")
        return rows

    def run(self):
        """Report DataFrame in grid order, one row per point and variant."""
        if self.workers == 1:
            blocks = [self._rows_for_xi(xi) for xi in self.grid.xi]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                blocks = list(pool.map(self._rows_for_xi, self.grid.xi))

        report = pd.DataFrame([row for block in blocks for row in block], columns=REPORT_COLUMNS)
        failures = int((~report["passed"]).sum())
        if failures:
            logger.warning(
                f"oracle validation: {failures}/{len(report)} comparisons above "
                f"{self.grid.tolerance:.1e} (max deviation {report['deviation'].max():.3e})"
            )
        else:
            logger.info(
                f"oracle validation passed: {len(report)} comparisons, "
                f"max deviation {report['deviation'].max():.3e}"
            )
        return report


def validate_grid(grid=None, double_click_modes=(True, False), tail_tolerance=None, workers=1):
    """Oracle report for ``grid`` (the default 108-point grid if omitted)."""
    return OracleValidationService(grid, double_click_modes, tail_tolerance, workers).run()
