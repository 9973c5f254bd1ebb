import dataclasses
import math

from django.test import SimpleTestCase

from atmosphere.channels.transmittance_models import (
    Copropagating,
    Counterpropagating,
    EllipticBeam,
    TruncatedLogNormal,
)
from core.exceptions import ConfigError
from photocount.sources import BellState, DetectorParams, Pdc
from simulations.forms import FloatListField
from simulations.services.run_config import list_presets, load_run_config, parse_run_config

BASE = """
[run]
samples = 5000
seed = 7

[source]
kind = pdc
xi = 0.1, 0.2, 0.3

[detector]
eta_c = 0.3
nu = 1.7e-5

[scenario]
kind = copropagation
model = strong

[model.strong]
kind = lognormal
mean = 1e-3
variance = 2.2e-6
eta_m = 0.04
"""


class FloatListFieldTests(SimpleTestCase):

    def test_comma_list_and_range(self):
        field = FloatListField()
        self.assertEqual(field.clean("0.1, 0.2,0.3"), [0.1, 0.2, 0.3])
        grid = field.clean("0:0.035:8")
        self.assertEqual(len(grid), 8)
        self.assertEqual(grid[0], 0.0)
        self.assertAlmostEqual(grid[-1], 0.035, places=15)

    def test_rejects_bad_lists(self):
        field = FloatListField(min_value=0.0)
        for text in ("0.2, 0.1", "0.1, 0.1", "a, b", "-0.1, 0.2", "0.1, nan", "0:1:0"):
            with self.subTest(text=text):
                with self.assertRaises(Exception):
                    field.clean(text)

    def test_unordered_lists_when_allowed(self):
        self.assertEqual(FloatListField(monotone=False).clean("0.7, 0.1"), [0.7, 0.1])


class ParseRunConfigTests(SimpleTestCase):

    def test_full_config(self):
        config = parse_run_config(BASE, name="base")
        self.assertEqual(config.samples, 5000)
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.sources, (Pdc(0.1), Pdc(0.2), Pdc(0.3)))
        self.assertEqual(config.xi_grid, (0.1, 0.2, 0.3))
        self.assertEqual(config.detector, DetectorParams(0.3, 1.7e-5))
        self.assertIsInstance(config.scenario, Copropagating)
        self.assertIsInstance(config.scenario.model, TruncatedLogNormal)
        self.assertTrue(config.include_double_clicks)

    def test_bell_source_and_shared_counterpropagation_model(self):
        text = BASE.replace("kind = pdc\nxi = 0.1, 0.2, 0.3", "kind = bell").replace(
            "kind = copropagation", "kind = counterpropagation"
        )
        config = parse_run_config(text)
        self.assertEqual(config.sources, (BellState(),))
        self.assertEqual(config.xi_grid, (0.0,))
        self.assertIsInstance(config.scenario, Counterpropagating)
        self.assertIs(config.scenario.model_a, config.scenario.model_b)

    def test_double_clicks_switch(self):
        config = parse_run_config(BASE.replace("seed = 7", "seed = 7\ndouble_clicks = false"))
        self.assertFalse(config.include_double_clicks)

    def test_errors_name_line_and_key(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_run_config(BASE.replace("eta_c = 0.3", "eta_c = 1.5"))
        self.assertEqual(ctx.exception.key, "detector.eta_c")
        self.assertEqual(ctx.exception.line, BASE.splitlines().index("eta_c = 0.3") + 1)

    def test_rejects_unknown_sections_and_keys(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_run_config(BASE + "\n[plots]\nstyle = dark\n")
        self.assertEqual(ctx.exception.key, "plots")

        with self.assertRaises(ConfigError) as ctx:
            parse_run_config(BASE.replace("nu = 1.7e-5", "nu = 1.7e-5\ngain = 2"))
        self.assertEqual(ctx.exception.key, "detector.gain")

    def test_rejects_unknown_model_reference(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_run_config(BASE.replace("model = strong", "model = weak"))
        self.assertEqual(ctx.exception.key, "scenario.model")

    def test_rejects_invalid_values(self):
        bad = {
            "samples = 5000": "samples = 10",
            "seed = 7": "seed = -1",
            "xi = 0.1, 0.2, 0.3": "xi = 0.3, 0.2",
            "kind = copropagation": "kind = sideways",
        }
        for old, new in bad.items():
            with self.subTest(value=new):
                with self.assertRaises(ConfigError):
                    parse_run_config(BASE.replace(old, new))

    def test_scenario_shape_rules(self):
        with self.assertRaises(ConfigError):
            parse_run_config(BASE.replace("model = strong", "model_a = strong\nmodel_b = strong"))
        counter = BASE.replace("kind = copropagation", "kind = counterpropagation").replace(
            "model = strong", "model = strong\nmodel_a = strong"
        )
        with self.assertRaises(ConfigError):
            parse_run_config(counter)

    def test_validation_grid(self):
        text = BASE + """
[validate]
xi = 0.05
eta_c = 0.6
nu = 0
eta_a = 0.9, 0.2
eta_b = 0.4, 0.2
delta_theta = 0
closed_form_eta_c_shift = 0.05
"""
        grid = parse_run_config(text).validation
        self.assertEqual(grid.transmittances, ((0.9, 0.4), (0.2, 0.2)))
        self.assertEqual(grid.closed_form_eta_c_shift, 0.05)
        self.assertEqual(grid.size, 2)

        with self.assertRaises(ConfigError):
            parse_run_config(text.replace("eta_b = 0.4, 0.2", "eta_b = 0.4"))

    def test_missing_sections_reported_on_use(self):
        config = parse_run_config(BASE)
        with self.assertRaises(ConfigError) as ctx:
            config.require("postselection")
        self.assertEqual(ctx.exception.key, "postselection")

    def test_overrides(self):
        config = parse_run_config(BASE).with_overrides(samples=2000, seed=11, include_double_clicks=False)
        self.assertEqual((config.samples, config.seed, config.include_double_clicks), (2000, 11, False))
        self.assertEqual(parse_run_config(BASE).with_overrides(), parse_run_config(BASE))
        with self.assertRaises(ConfigError):
            parse_run_config(BASE).with_overrides(samples=999)


class PresetTests(SimpleTestCase):

    def test_shipped_presets(self):
        self.assertEqual(list_presets(), ["fig2a", "fig2b", "fig3a", "fig3b", "fig5a", "fig5b"])
        for name in list_presets():
            with self.subTest(preset=name):
                config = load_run_config(name)
                self.assertEqual(config.name, name)
                self.assertEqual(config.samples, 100000)

    def test_preset_contents(self):
        fig2a = load_run_config("fig2a")
        self.assertEqual(len(fig2a.sources), 25)
        self.assertAlmostEqual(fig2a.scenario.model.channel.sigma, 1.0785, delta=1e-4)

        fig5b = load_run_config("fig5b")
        self.assertEqual(fig5b.sources, (Pdc(0.31),))
        self.assertIsInstance(fig5b.scenario.model_a, EllipticBeam)
        self.assertEqual(len(fig5b.eta_ps_grid), 7)
        self.assertTrue(math.isclose(fig5b.eta_ps_grid[-1], 0.6))

    def test_unknown_reference(self):
        with self.assertRaises(ConfigError) as ctx:
            load_run_config("fig9z")
        self.assertIn("fig2a", str(ctx.exception))

    def test_config_text_is_kept(self):
        config = load_run_config("fig3a")
        self.assertIn("[model.strong]", config.text)
        self.assertTrue(dataclasses.is_dataclass(config))
