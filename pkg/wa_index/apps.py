from django.apps import AppConfig


class WaIndexConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'wa_index'
