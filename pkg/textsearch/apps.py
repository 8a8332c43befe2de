from django.apps import AppConfig


class TextsearchConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'textsearch'
