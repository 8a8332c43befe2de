from django.apps import AppConfig


class SuffixTreeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'suffix_tree'
