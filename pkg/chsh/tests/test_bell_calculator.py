import math

from django.test import SimpleTestCase

from chsh.metrics.bell_calculator import AngleSettings, BellResult, bell_parameter, correlation
from core.exceptions import UndefinedCorrelationError


class CorrelationTests(SimpleTestCase):

    def test_only_same_outcomes(self):
        self.assertEqual(correlation(0.5, 0.0), 1.0)

    def test_balanced_outcomes(self):
        for p in (1e-12, 0.1, 0.5):
            self.assertEqual(correlation(p, p), 0.0)

    def test_direct_arithmetic(self):
        self.assertAlmostEqual(correlation(0.2, 0.6), -0.5, places=15)

    def test_no_coincidences(self):
        with self.assertRaises(UndefinedCorrelationError):
            correlation(0.0, 0.0)


class BellParameterTests(SimpleTestCase):

    def test_ideal_correlations_at_canonical_angles(self):
        angles = AngleSettings.canonical()
        e = [-math.cos(2 * delta) for delta in angles.differences()]
        self.assertAlmostEqual(bell_parameter(*e), 2 * math.sqrt(2), places=14)

    def test_no_correlation(self):
        self.assertEqual(bell_parameter(0.0, 0.0, 0.0, 0.0), 0.0)

    def test_algebraic_maximum(self):
        self.assertEqual(bell_parameter(1.0, -1.0, 1.0, 1.0), 4.0)


class AngleSettingsTests(SimpleTestCase):

    def test_reduced_mod_pi(self):
        angles = AngleSettings(-math.pi / 8, math.pi + 0.1, 2 * math.pi, 0.3)
        self.assertAlmostEqual(angles.theta_a1, 7 * math.pi / 8, places=14)
        self.assertAlmostEqual(angles.theta_b1, 0.1, places=14)
        self.assertLess(angles.theta_a2, 1e-14)
        for value in angles.as_tuple():
            self.assertTrue(0 <= value < math.pi)

    def test_from_differences(self):
        angles = AngleSettings.from_differences((math.pi / 8, math.pi / 4, 3 * math.pi / 8))
        self.assertEqual(angles, AngleSettings.canonical())

    def test_difference_order(self):
        angles = AngleSettings(0.1, 0.2, 0.4, 0.8)
        expected = (0.1 - 0.2, 0.1 - 0.8, 0.4 - 0.8, 0.4 - 0.2)
        for got, want in zip(angles.differences(), expected):
            self.assertAlmostEqual(got, want, places=15)

    def test_rejects_non_finite(self):
        with self.assertRaises(ValueError):
            AngleSettings(0.0, math.nan, 0.0, 0.0)


class BellResultTests(SimpleTestCase):

    def test_value_must_match_correlations(self):
        with self.assertRaises(ValueError):
            BellResult(bell_value=2.5, settings=AngleSettings.canonical(), correlations=(0.5, -0.5, 0.5, 0.5))

    def test_violation_flag(self):
        result = BellResult(
            bell_value=2.2, settings=AngleSettings.canonical(), correlations=(0.55, -0.55, 0.55, 0.55)
        )
        self.assertTrue(result.violates)

    def test_negative_stderr(self):
        with self.assertRaises(ValueError):
            BellResult(
                bell_value=0.0, settings=AngleSettings.canonical(), correlations=(0, 0, 0, 0), stderr=-1.0
            )
