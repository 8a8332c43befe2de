from django.apps import AppConfig


class LongRetrievalConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'long_retrieval'
