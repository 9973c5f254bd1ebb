# simulations/models.py

from django.db import models
from django.utils import timezone


# ==========================================================
# RUN LEDGER
# ==========================================================

class SimulationRun(models.Model):
    """
    One invocation of a simulation command.
    """

    STATUS_CHOICES = [
        ("RUNNING", "Running"),
        ("SUCCEEDED", "Succeeded"),
        ("FAILED", "Failed"),
    ]

    command = models.CharField(max_length=50)
    config_name = models.CharField(max_length=200)
    config_text = models.TextField(blank=True)

    seed = models.BigIntegerField()
    samples = models.IntegerField()
    include_double_clicks = models.BooleanField(default=True)

    status = models.CharField(
        max_length=20,
        choices=STATUS_CHOICES,
        default="RUNNING"
    )

    row_count = models.IntegerField(null=True, blank=True)
    output_path = models.CharField(max_length=500, blank=True)
    message = models.TextField(blank=True)

    started_at = models.DateTimeField(default=timezone.now)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ["-started_at"]

    def __str__(self):
        return f"{self.command} | {self.config_name} | {self.status}"
