from django.apps import AppConfig


class PhotocountConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'photocount'
    verbose_name = 'Photocounting statistics'
