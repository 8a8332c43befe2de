from django.apps import AppConfig


class BitvecConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'bitvec'
