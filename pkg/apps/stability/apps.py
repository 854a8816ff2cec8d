# apps/stability/apps.py
from django.apps import AppConfig


class StabilityConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.stability'
    verbose_name = 'Stability Analysis'
