from django.apps import AppConfig


class FockoracleConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'fockoracle'
    verbose_name = 'Truncated Fock-space oracle'
