# config/urls.py
"""
The simulator is driven from the command line; the only web surface is the
admin, where recorded SimulationRun rows can be browsed.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path("admin/", admin.site.urls),
]
