from django.apps import AppConfig


class AinftyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ainfty'
    verbose_name = 'A-infinity structures'
