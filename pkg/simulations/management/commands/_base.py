# simulations/management/commands/_base.py
"""
Shared plumbing of the simulation commands: flags, config loading, the
run ledger, CSV output and the mapping of failures to exit codes

    0  success
    1  configuration error (including a Fock cutoff that is too small)
    2  validation failure
    3  numerical failure
"""

import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import ConfigError, CutoffTooSmallError, FeasibilityError, NumericalError
from simulations.engine.scan_engine import ScanEngine
from simulations.services.csv_writer import write_csv
from simulations.services.run_config import load_run_config
from simulations.services.run_ledger import RunLedger

logger = logging.getLogger(__name__)

EXIT_CONFIG = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class ValidationFailed(Exception):
    """The command ran but its results fail their acceptance check."""


class SimulationCommand(BaseCommand):
    """
    Subclasses implement ``run_engine(engine)`` returning a DataFrame and
    may override ``check_result(frame)``.
    """

    def add_arguments(self, parser):
        parser.add_argument("--config", required=True, help="Config file path or preset name (fig2a ... fig5b)")
        parser.add_argument("--seed", type=int, help="Root seed (default BELLSIM_DEFAULT_SEED)")
        parser.add_argument("--samples", type=int, help="Monte Carlo samples per point (>= 1000)")
        parser.add_argument("--out", help="CSV output path (default stdout)")
        parser.add_argument("--no-double-clicks", action="store_true", help="Discard double-click events")
        parser.add_argument("--workers", type=int, default=settings.BELLSIM_WORKERS, help="Grid-point threads")
        parser.add_argument("--record", action="store_true", help="Write a SimulationRun ledger row")

    @property
    def command_name(self):
        return self.__module__.rsplit(".", 1)[-1]

    def run_engine(self, engine):
        raise NotImplementedError

    def check_result(self, frame):
        pass

    def _fail(self, ledger, message, returncode):
        ledger.finish("FAILED", message=message)
        logger.error(f"{self.command_name} failed: {message}")
        raise CommandError(message, returncode=returncode)

    def handle(self, *args, **options):
        ledger = RunLedger(options["record"] or settings.BELLSIM_RECORD_RUNS)

        try:
            if options["seed"] is not None and options["seed"] < 0:
                raise ConfigError(f"seed must be >= 0, got {options['seed']}", key="--seed")
            config = load_run_config(options["config"]).with_overrides(
                samples=options["samples"],
                seed=options["seed"],
                include_double_clicks=False if options["no_double_clicks"] else None,
            )
            engine = ScanEngine(config, workers=options["workers"])
        except ConfigError as exc:
            raise CommandError(f"configuration error: {exc}", returncode=EXIT_CONFIG) from exc

        ledger.start(self.command_name, config, engine.seed, engine.samples)

        try:
            frame = self.run_engine(engine)
        except (ConfigError, CutoffTooSmallError) as exc:
            self._fail(ledger, f"configuration error: {exc}", EXIT_CONFIG)
        except (NumericalError, FeasibilityError) as exc:
            self._fail(ledger, f"numerical failure: {exc}", EXIT_NUMERICAL)

        path = write_csv(frame, options["out"], stream=self.stdout)

        try:
            self.check_result(frame)
        except ValidationFailed as exc:
            ledger.finish("FAILED", row_count=len(frame), output_path=path, message=str(exc))
            raise CommandError(f"validation failed: {exc}", returncode=EXIT_VALIDATION) from exc

        ledger.finish("SUCCEEDED", row_count=len(frame), output_path=path)
        if path is not None:
            self.stderr.write(f"{self.command_name}: {len(frame)} rows written to {path}")
