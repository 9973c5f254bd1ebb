import io
import math
import os
import tempfile

import numpy as np
import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from simulations.engine.scan_engine import POSTSELECTION_COLUMNS, SQUEEZING_COLUMNS, STATS_COLUMNS
from simulations.models import SimulationRun

SQRT8 = 2 * math.sqrt(2)

DETERMINISTIC_STATS = """
[stats]
model = fixed
thresholds = 0.2, 0.4, 0.6

[model.fixed]
kind = deterministic
eta0 = 0.4
"""

LOGNORMAL_STATS = """
[stats]
model = strong
thresholds = 0.001, 0.01

[model.strong]
kind = lognormal
mu = 7.49
sigma = 1.08
eta_m = 0.04
"""

ELLIPTIC_STATS = """
[stats]
model = weak

[model.weak]
kind = elliptic
rytov_sq = 1.5
fresnel = 0.98
W0 = 0.02
aperture = 0.04
length = 1600
eta_m = 0.75
"""

BELL_SOURCE = """
[source]
kind = bell

[detector]
eta_c = 0.6
nu = 0

[scenario]
kind = counterpropagation
model_a = strong
model_b = fixed

[model.strong]
kind = lognormal
mean = 1e-3
variance = 2.2e-6
eta_m = 0.04

[model.fixed]
kind = deterministic
eta0 = 0.3
"""

SMALL_SQUEEZING = """
[source]
kind = pdc
xi = 0.05, 0.15, 0.25

[detector]
eta_c = 0.6
nu = 1e-4

[scenario]
kind = copropagation
model = fixed

[model.fixed]
kind = deterministic
eta0 = 0.5
"""

SMALL_VALIDATION = """
[validate]
xi = 0.1
eta_c = 0.6
nu = 0, 1e-3
eta_a = 0.8
eta_b = 0.5
delta_theta = 0.3
"""


class CommandTestMixin:

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def config_file(self, text, name="run.cfg"):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def run_command(self, command, config, **options):
        stdout, stderr = io.StringIO(), io.StringIO()
        call_command(command, config=config, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue()

    def run_frame(self, command, config, **options):
        return pd.read_csv(io.StringIO(self.run_command(command, config, **options)))

    def assertExitCode(self, code, command, config, **options):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(command, config, **options)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


class PdtStatsCommandTests(CommandTestMixin, SimpleTestCase):

    def test_deterministic_model(self):
        frame = self.run_frame("pdt_stats", self.config_file(DETERMINISTIC_STATS), samples=2000)
        self.assertEqual(frame.columns.tolist(), STATS_COLUMNS)

        values = frame.set_index("quantity")
        self.assertEqual(values.loc["mean", "value"], 0.4)
        self.assertEqual(values.loc["variance", "value"], 0.0)
        self.assertEqual(values.loc["mean", "stderr"], 0.0)

        exceedances = frame[frame["quantity"] == "exceedance"]
        self.assertEqual(exceedances["lower"].tolist(), [0.2, 0.4, 0.6])
        self.assertEqual(exceedances["value"].tolist(), [1.0, 1.0, 0.0])

        histogram = frame[frame["quantity"] == "histogram"]
        self.assertEqual(len(histogram), 100)
        self.assertAlmostEqual(histogram["value"].sum(), 1.0, places=12)
        self.assertEqual(histogram["value"].max(), 1.0)

    def test_lognormal_fit_parameters(self):
        frame = self.run_frame("pdt_stats", self.config_file(LOGNORMAL_STATS), samples=20000)
        values = frame.set_index("quantity")
        self.assertAlmostEqual(values.loc["fit_sigma", "value"], 1.08, places=12)
        self.assertAlmostEqual(values.loc["fit_mu", "value"], 7.49, places=12)
        self.assertLess(values.loc["mean", "value"], 0.04)

    def test_same_seed_same_bytes(self):
        path = self.config_file(ELLIPTIC_STATS)
        first = self.run_command("pdt_stats", path, samples=5000, seed=3)
        self.assertEqual(first, self.run_command("pdt_stats", path, samples=5000, seed=3))
        self.assertNotEqual(first, self.run_command("pdt_stats", path, samples=5000, seed=4))

    def test_out_file_matches_stdout(self):
        path = self.config_file(ELLIPTIC_STATS)
        out = os.path.join(self.tmp.name, "stats.csv")
        printed = self.run_command("pdt_stats", path, samples=2000)
        self.assertEqual(self.run_command("pdt_stats", path, samples=2000, out=out), "")
        with open(out, encoding="utf-8", newline="") as handle:
            self.assertEqual(handle.read(), printed)

    def test_configuration_errors_exit_1(self):
        self.assertExitCode(1, "pdt_stats", "no-such-preset")
        self.assertExitCode(1, "pdt_stats", self.config_file(DETERMINISTIC_STATS + "\n[plots]\n"))
        self.assertExitCode(1, "pdt_stats", self.config_file(DETERMINISTIC_STATS), samples=10)
        self.assertExitCode(1, "pdt_stats", self.config_file(DETERMINISTIC_STATS), seed=-2)
        # pdt_stats needs a [stats] section
        self.assertExitCode(1, "pdt_stats", self.config_file(SMALL_SQUEEZING))

        error = self.assertExitCode(
            1, "pdt_stats", self.config_file(DETERMINISTIC_STATS.replace("eta0 = 0.4", "eta0 = 1.4"))
        )
        self.assertIn("model.fixed.eta0", str(error))


class ScanSqueezingCommandTests(CommandTestMixin, SimpleTestCase):

    def test_bell_source_without_dark_counts_is_ideal(self):
        frame = self.run_frame("scan_squeezing", self.config_file(BELL_SOURCE), samples=2000)
        self.assertEqual(frame.columns.tolist(), SQUEEZING_COLUMNS)
        self.assertEqual(len(frame), 1)
        self.assertEqual(frame.loc[0, "xi"], 0.0)
        for channel in ("fading", "det"):
            for clicks in ("dc", "nodc"):
                self.assertLess(abs(frame.loc[0, f"bell_{channel}_{clicks}"] - SQRT8), 1e-9)
        self.assertAlmostEqual(frame.loc[0, "eta_mean_b"], 0.3, places=15)

    def test_rows_follow_grid_and_ignore_worker_count(self):
        path = self.config_file(SMALL_SQUEEZING)
        serial = self.run_command("scan_squeezing", path, samples=2000, workers=1)
        threaded = self.run_command("scan_squeezing", path, samples=2000, workers=3)
        self.assertEqual(serial, threaded)

        frame = pd.read_csv(io.StringIO(serial))
        self.assertEqual(frame["xi"].tolist(), [0.05, 0.15, 0.25])
        # A deterministic channel is its own deterministic baseline
        np.testing.assert_allclose(frame["bell_fading_dc"], frame["bell_det_dc"], rtol=0, atol=1e-12)
        self.assertTrue((frame["bell_fading_nodc"] >= frame["bell_fading_dc"] - 1e-9).all())
        self.assertTrue((frame["bell_fading_dc"] >= frame["bell_fading_dc_canonical"]).all())
        self.assertTrue((frame["bell_fading_dc_stderr"] == 0.0).all())

    def test_discarding_double_clicks_leaves_dc_columns_empty(self):
        path = self.config_file(SMALL_SQUEEZING)
        full = self.run_frame("scan_squeezing", path, samples=2000)
        discarded = self.run_frame("scan_squeezing", path, samples=2000, no_double_clicks=True)

        self.assertEqual(discarded.columns.tolist(), SQUEEZING_COLUMNS)
        dc_columns = [column for column in SQUEEZING_COLUMNS if "_dc" in column]
        nodc_columns = [column for column in SQUEEZING_COLUMNS if "_nodc" in column]
        self.assertEqual(len(dc_columns), 6)
        self.assertTrue(discarded[dc_columns].isna().all().all())
        pd.testing.assert_frame_equal(discarded[nodc_columns], full[nodc_columns])
        pd.testing.assert_frame_equal(discarded[["xi", "eta_mean_a", "eta_mean_b"]], full[["xi", "eta_mean_a", "eta_mean_b"]])

    def test_run_section_can_discard_double_clicks(self):
        frame = self.run_frame(
            "scan_squeezing", self.config_file("[run]\ndouble_clicks = false\n" + SMALL_SQUEEZING), samples=2000
        )
        self.assertTrue(frame["bell_fading_dc"].isna().all())
        self.assertFalse(frame["bell_fading_nodc"].isna().any())


class ScanPostselectionCommandTests(CommandTestMixin, SimpleTestCase):

    def test_strong_turbulence_rescued_by_postselection(self):
        frame = self.run_frame("scan_postselection", "fig5a", samples=20000)
        self.assertEqual(frame.columns.tolist(), POSTSELECTION_COLUMNS)
        self.assertEqual(len(frame), 8)
        self.assertLess(frame.loc[0, "bell"], 2.0)
        best = frame["bell"].idxmax()
        self.assertGreater(frame.loc[best, "bell"] - 3 * frame.loc[best, "bell_stderr"], 2.0)
        self.assertEqual(frame.loc[0, "feasibility"], 1.0)
        self.assertTrue((np.diff(frame["feasibility"]) <= 0).all())

    def test_weak_turbulence_scan(self):
        frame = self.run_frame("scan_postselection", "fig5b", samples=20000)
        self.assertEqual(len(frame), 7)
        self.assertLess(frame.loc[0, "bell"], 2.0)
        self.assertGreater((frame["bell"] - 3 * frame["bell_stderr"]).max(), 2.0)
        self.assertTrue((np.diff(frame["feasibility"]) <= 0).all())

    def test_needs_a_single_source(self):
        text = SMALL_SQUEEZING + "\n[postselection]\neta_ps = 0, 0.2\n"
        error = self.assertExitCode(1, "scan_postselection", self.config_file(text))
        self.assertIn("source.xi", str(error))


class ValidateCommandTests(CommandTestMixin, SimpleTestCase):

    def test_closed_forms_match_oracle(self):
        frame = self.run_frame("validate", self.config_file(SMALL_VALIDATION))
        self.assertEqual(len(frame), 4)
        self.assertTrue(frame["passed"].all())
        self.assertLess(frame["deviation"].max(), 1e-6)

    def test_no_double_clicks_runs_one_mode(self):
        frame = self.run_frame("validate", self.config_file(SMALL_VALIDATION), no_double_clicks=True)
        self.assertEqual(len(frame), 2)
        self.assertFalse(frame["double_clicks"].any())

    def test_perturbed_closed_form_exits_2(self):
        text = SMALL_VALIDATION + "closed_form_eta_c_shift = 0.05\n"
        out = os.path.join(self.tmp.name, "report.csv")
        self.assertExitCode(2, "validate", self.config_file(text), out=out)
        report = pd.read_csv(out)
        self.assertFalse(report["passed"].any())

    def test_untruncatable_squeezing_exits_1(self):
        text = SMALL_VALIDATION.replace("xi = 0.1", "xi = 1.0")
        error = self.assertExitCode(1, "validate", self.config_file(text))
        self.assertIn("cutoff", str(error))


class RunLedgerTests(CommandTestMixin, TestCase):

    def test_record_successful_run(self):
        path = self.config_file(DETERMINISTIC_STATS)
        self.run_command("pdt_stats", path, samples=2000, seed=5, record=True)

        run = SimulationRun.objects.get()
        self.assertEqual(run.command, "pdt_stats")
        self.assertEqual(run.status, "SUCCEEDED")
        self.assertEqual((run.seed, run.samples), (5, 2000))
        self.assertEqual(run.row_count, 3 + 3 + 100)
        self.assertIn("[model.fixed]", run.config_text)
        self.assertIsNotNone(run.finished_at)

    def test_record_failed_validation(self):
        text = SMALL_VALIDATION + "closed_form_eta_c_shift = 0.05\n"
        self.assertExitCode(2, "validate", self.config_file(text), record=True)

        run = SimulationRun.objects.get()
        self.assertEqual(run.status, "FAILED")
        self.assertIn("above tolerance", run.message)

    def test_not_recorded_by_default(self):
        self.run_command("pdt_stats", self.config_file(DETERMINISTIC_STATS), samples=2000)
        self.assertFalse(SimulationRun.objects.exists())
