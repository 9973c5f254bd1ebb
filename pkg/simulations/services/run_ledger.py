# simulations/services/run_ledger.py
"""
RunLedger

Writes SimulationRun rows for commands started with --record (or with
BELLSIM_RECORD_RUNS). A failing database never fails the run itself: the
error is logged and the run goes on unrecorded.
"""

import logging

from django.db import DatabaseError
from django.utils import timezone

from simulations.models import SimulationRun

logger = logging.getLogger(__name__)


class RunLedger:

    def __init__(self, enabled):
        self.enabled = enabled
        self.run = None

    def start(self, command, config, seed, samples):
        if not self.enabled:
            return None
        try:
            self.run = SimulationRun.objects.create(
                command=command,
                config_name=config.name,
                config_text=config.text,
                seed=seed,
                samples=samples,
                include_double_clicks=config.include_double_clicks,
            )
        except (DatabaseError, OverflowError) as exc:
            logger.error(f"Run ledger unavailable, continuing unrecorded: {exc}")
            self.run = None
        return self.run

    def finish(self, status, row_count=None, output_path=None, message=""):
        if self.run is None:
            return
        self.run.status = status
        self.run.row_count = row_count
        self.run.output_path = str(output_path or "")
        self.run.message = message
        self.run.finished_at = timezone.now()
        try:
            self.run.save()
        except DatabaseError as exc:
            logger.error(f"Could not update run {self.run.pk}: {exc}")
