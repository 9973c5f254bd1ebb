from django.apps import AppConfig


class ChshConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'chsh'
    verbose_name = 'CHSH Bell parameter'
