from django.apps import AppConfig


class StrcoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'strcore'
