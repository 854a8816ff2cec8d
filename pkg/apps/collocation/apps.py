# apps/collocation/apps.py
from django.apps import AppConfig


class CollocationConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.collocation'
    verbose_name = 'Spectral Collocation (GDQM)'
