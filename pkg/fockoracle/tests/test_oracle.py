import math

from django.test import SimpleTestCase

from chsh.metrics.bell_calculator import correlation
from core.exceptions import CutoffTooSmallError
from fockoracle.engine.oracle_engine import (
    analyzed_density,
    lossy_density,
    oracle_click_probs,
    oracle_joint_probs,
    source_state,
)
from fockoracle.processors.detection import click_pattern_probs
from fockoracle.services.validation_service import REPORT_COLUMNS, ValidationGrid, validate_grid
from photocount.analytics.bell_state import bell_state_correlation, factorized_bell_channel_probs
from photocount.analytics.click_probabilities import ClickIntegrand, pdc_click_probs
from photocount.sources import BellState, DetectorParams, Pdc


class OracleTests(SimpleTestCase):

    def test_ideal_bell_statistics(self):
        same, different = oracle_click_probs(BellState(), 1.0, 1.0, -math.pi / 8, DetectorParams(1.0, 0.0))
        self.assertAlmostEqual(same + different, 1.0, places=14)
        self.assertAlmostEqual(correlation(same, different), -math.cos(math.pi / 4), places=14)

    def test_vacuum_never_clicks(self):
        joint = oracle_joint_probs(Pdc(0.0), 0.7, 0.3, 0.2, 0.0, DetectorParams(0.6, 0.0))
        for value in joint.values():
            self.assertEqual(value, 0.0)

    def test_matches_closed_form(self):
        detector = DetectorParams(0.6, 1e-3)
        for flag in (True, False):
            same, different = oracle_click_probs(Pdc(0.1), 0.7, 0.3, math.pi / 8, detector, include_double_clicks=flag)
            closed = pdc_click_probs(0.1, detector, [(0.7, 0.3)], math.pi / 8, flag)
            self.assertLess(abs(same - closed.p_same), 1e-6)
            self.assertLess(abs(different - closed.p_different), 1e-6)

    def test_click_count_partition_matches_closed_form(self):
        detector = DetectorParams(0.6, 1e-3)
        for eta_a, eta_b, delta in ((0.7, 0.3, math.pi / 8), (1.0, 0.9, 0.4)):
            density = analyzed_density(lossy_density(source_state(Pdc(0.1)), eta_a, eta_b), delta, 0.0)
            counts = {}
            for pattern, probability in click_pattern_probs(density, detector).items():
                key = (pattern.t_a + pattern.r_a, pattern.t_b + pattern.r_b)
                counts[key] = counts.get(key, 0.0) + probability

            cells = ClickIntegrand(0.1, detector, [(eta_a, eta_b)]).outcome_partition(delta)
            for key, values in cells.items():
                self.assertAlmostEqual(counts[key], values[0], delta=1e-7, msg=f"cell {key}")

    def test_bell_state_matches_closed_form(self):
        for eta_a, eta_b in ((1.0, 1.0), (0.7, 0.3), (0.1, 0.05)):
            probs = factorized_bell_channel_probs(eta_a, eta_b)
            for detector in (DetectorParams(0.6, 0.0), DetectorParams(0.3, 1e-3), DetectorParams(0.9, 0.05)):
                for delta in (0.0, math.pi / 8, 0.4):
                    for flag in (True, False):
                        same, different = oracle_click_probs(
                            BellState(), eta_a, eta_b, delta, detector, include_double_clicks=flag
                        )
                        expected = bell_state_correlation(probs, detector, delta, 0.0, flag)
                        self.assertAlmostEqual(correlation(same, different), expected, delta=1e-8)

    def test_explicit_cutoff_too_small(self):
        with self.assertRaises(CutoffTooSmallError):
            oracle_joint_probs(Pdc(0.2), 1.0, 1.0, 0.0, 0.0, DetectorParams(0.6, 0.0), n_max=2)


class ValidationServiceTests(SimpleTestCase):

    def test_default_grid_passes(self):
        report = validate_grid()
        self.assertEqual(ValidationGrid().size, 108)
        self.assertEqual(len(report), 216)
        self.assertEqual(list(report.columns), REPORT_COLUMNS)
        self.assertTrue(report["passed"].all(), msg=report.loc[~report["passed"]].to_string())
        self.assertLessEqual(report["deviation"].max(), 1e-6)

    def test_mismatched_efficiency_fails(self):
        grid = ValidationGrid(xi=(0.1,), transmittances=((0.7, 0.3),), closed_form_eta_c_shift=0.05)
        report = validate_grid(grid, double_click_modes=(False,))
        self.assertFalse(report["passed"].any())

    def test_rows_follow_grid_order(self):
        grid = ValidationGrid(xi=(0.1, 0.05), eta_c=(0.6,), nu=(0.0,), transmittances=((1.0, 1.0),), delta_theta=(0.0,))
        report = validate_grid(grid, workers=2)
        self.assertEqual(list(report["xi"]), [0.1, 0.1, 0.05, 0.05])
        self.assertEqual(list(report["double_clicks"]), [True, False, True, False])

    def test_squeezing_beyond_cutoff(self):
        with self.assertRaises(CutoffTooSmallError):
            validate_grid(ValidationGrid(xi=(1.0,)))
