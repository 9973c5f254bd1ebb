from django.contrib import admin
from .models import SimulationRun


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    """
    Admin view of the run ledger.
    """

    list_display = (
        "command",
        "config_name",
        "seed",
        "samples",
        "status",
        "row_count",
        "started_at",
    )

    list_filter = ("command", "status", "include_double_clicks")

    search_fields = ("config_name", "message")

    readonly_fields = ("config_text", "started_at", "finished_at")
