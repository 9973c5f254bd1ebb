import math

import numpy as np
from django.test import SimpleTestCase

from fockoracle.engine.fock_state import FockState4, build_pdc_state
from fockoracle.processors.detection import (
    ALL_PATTERNS,
    ClickPattern,
    click_pattern_probs,
    photon_number_distribution,
    squash,
)
from fockoracle.processors.loss import apply_loss, apply_site_loss
from fockoracle.processors.rotation import purity, rotate_site, trace
from photocount.sources import DetectorParams


def fock(n_ha, n_va, n_hb, n_vb, cutoff=2):
    amplitudes = np.zeros((cutoff + 1,) * 4)
    amplitudes[n_ha, n_va, n_hb, n_vb] = 1.0
    return FockState4(amplitudes=amplitudes, cutoff=cutoff)


class LossTests(SimpleTestCase):

    def test_unit_transmittance_is_identity(self):
        density = build_pdc_state(0.2).density()
        np.testing.assert_array_equal(apply_loss(density, 1.0, 2), density)

    def test_total_loss_empties_mode(self):
        populations = photon_number_distribution(apply_loss(fock(1, 0, 0, 0), 0.0, 0))
        self.assertAlmostEqual(populations[0, 0, 0, 0], 1.0, places=15)

    def test_binomial_populations(self):
        populations = photon_number_distribution(apply_loss(fock(0, 0, 0, 2), 0.5, 3))
        self.assertAlmostEqual(populations[0, 0, 0, 2], 0.25, places=15)
        self.assertAlmostEqual(populations[0, 0, 0, 1], 0.5, places=15)
        self.assertAlmostEqual(populations[0, 0, 0, 0], 0.25, places=15)

    def test_trace_preserved(self):
        state = build_pdc_state(0.2)
        density = apply_site_loss(apply_site_loss(state, 0.37, "A"), 0.81, "B")
        self.assertAlmostEqual(trace(density), state.norm, delta=1e-10)

    def test_rejects_invalid_transmittance(self):
        with self.assertRaises(ValueError):
            apply_loss(fock(1, 0, 0, 0), 1.2, 0)


class RotationTests(SimpleTestCase):

    def test_zero_angle_is_identity(self):
        density = build_pdc_state(0.2).density()
        np.testing.assert_allclose(rotate_site(density, 0.0, "A"), density, rtol=0, atol=1e-15)

    def test_quarter_turn_moves_photon_to_reflected_port(self):
        populations = photon_number_distribution(rotate_site(fock(1, 0, 0, 0), math.pi / 2, "A"))
        self.assertAlmostEqual(populations[0, 1, 0, 0], 1.0, places=15)

    def test_malus_law(self):
        for theta in np.linspace(0, math.pi, 9):
            populations = photon_number_distribution(rotate_site(fock(0, 0, 1, 0), theta, "B"))
            self.assertAlmostEqual(populations[0, 0, 1, 0], math.cos(theta) ** 2, places=14)
            self.assertAlmostEqual(populations[0, 0, 0, 1], math.sin(theta) ** 2, places=14)

    def test_two_photon_interference(self):
        # |1_H 1_V> at 45 degrees leaves both photons in the same port
        populations = photon_number_distribution(rotate_site(fock(1, 1, 0, 0), math.pi / 4, "A"))
        self.assertAlmostEqual(populations[1, 1, 0, 0], 0.0, places=15)
        self.assertAlmostEqual(populations[2, 0, 0, 0], 0.5, places=14)

    def test_trace_and_purity_preserved(self):
        density = build_pdc_state(0.2).density()
        rotated = rotate_site(rotate_site(density, 0.3, "A"), 1.1, "B")
        self.assertAlmostEqual(trace(rotated), trace(density), delta=1e-10)
        self.assertAlmostEqual(purity(rotated), purity(density), delta=1e-10)


class DetectionTests(SimpleTestCase):

    def test_vacuum_without_noise_never_clicks(self):
        probs = click_pattern_probs(fock(0, 0, 0, 0).density(), DetectorParams(0.6, 0.0))
        self.assertEqual(probs[ClickPattern(False, False, False, False)], 1.0)

    def test_vacuum_noise_click_rate(self):
        nu = 0.05
        probs = click_pattern_probs(fock(0, 0, 0, 0).density(), DetectorParams(0.6, nu))
        marginal = sum(p for pattern, p in probs.items() if pattern.r_a)
        self.assertAlmostEqual(marginal, 1 - math.exp(-nu), places=15)

    def test_single_photon_efficiency(self):
        probs = click_pattern_probs(fock(0, 0, 1, 0).density(), DetectorParams(0.6, 0.0))
        self.assertAlmostEqual(probs[ClickPattern(False, False, True, False)], 0.6, places=15)
        self.assertAlmostEqual(probs[ClickPattern(False, False, False, False)], 0.4, places=15)

    def test_patterns_partition_unity(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            state = build_pdc_state(rng.uniform(0, 0.2))
            density = apply_site_loss(apply_site_loss(state, rng.uniform(), "A"), rng.uniform(), "B")
            density = rotate_site(density, rng.uniform(0, math.pi), "A")
            probs = click_pattern_probs(density, DetectorParams(rng.uniform(0.01, 1), rng.uniform(0, 0.1)))
            self.assertEqual(len(probs), 16)
            self.assertAlmostEqual(sum(probs.values()), state.norm, delta=1e-10)
            self.assertTrue(all(-1e-15 <= p <= 1 for p in probs.values()))


class SquashTests(SimpleTestCase):

    @staticmethod
    def only(pattern, mass):
        probs = {p: 0.0 for p in ALL_PATTERNS}
        probs[pattern] = mass
        return probs

    def test_single_clicks_pass_through(self):
        joint = squash(self.only(ClickPattern(True, False, True, False), 0.3))
        self.assertEqual(joint[("T", "T")], 0.3)
        self.assertEqual(sum(joint.values()), 0.3)

    def test_one_sided_double_click_split(self):
        joint = squash(self.only(ClickPattern(True, True, True, False), 0.3))
        self.assertEqual(joint[("T", "T")], 0.15)
        self.assertEqual(joint[("R", "T")], 0.15)
        self.assertEqual(joint[("T", "R")] + joint[("R", "R")], 0.0)

    def test_double_clicks_on_both_sides(self):
        joint = squash(self.only(ClickPattern(True, True, True, True), 0.4))
        for value in joint.values():
            self.assertEqual(value, 0.1)

    def test_double_clicks_discarded(self):
        joint = squash(self.only(ClickPattern(True, True, True, False), 0.3), include_double_clicks=False)
        self.assertEqual(sum(joint.values()), 0.0)

    def test_sum_is_coincidence_probability(self):
        rng = np.random.default_rng(3)
        weights = rng.uniform(size=16)
        probs = dict(zip(ALL_PATTERNS, weights / weights.sum()))
        coincidence = sum(p for pattern, p in probs.items() if (pattern.t_a or pattern.r_a) and (pattern.t_b or pattern.r_b))
        self.assertAlmostEqual(sum(squash(probs).values()), coincidence, delta=1e-12)
