from django.apps import AppConfig


class TreeToolsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'tree_tools'
