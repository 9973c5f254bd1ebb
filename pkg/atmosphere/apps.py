from django.apps import AppConfig


class AtmosphereConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'atmosphere'
    verbose_name = 'Atmospheric channels'
