from django.apps import AppConfig


class DistancesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'distances'
    verbose_name = 'Barcodes and distances'
