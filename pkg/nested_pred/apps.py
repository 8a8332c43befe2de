from django.apps import AppConfig


class NestedPredConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'nested_pred'
