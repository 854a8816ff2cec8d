"""
Django settings for the burgers project.

Generated by 'django-admin startproject' using Django 4.2, trimmed to what
the numerical apps and their management commands need: no URL routing,
templates or middleware, one database for the run ledger.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Base directory of the project
BASE_DIR = Path(__file__).resolve().parent.parent

# Load the .env file from the root folder
load_dotenv(BASE_DIR / ".env")

SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "dev-only-burgers-secret-key")
DEBUG = os.getenv("DEBUG") == "True"

# Application definition

INSTALLED_APPS = [

    'django.contrib.contenttypes',

#my apps
    'apps.collocation',
    'apps.solver',
    'apps.oracles',
    'apps.stability',
    'apps.metrics',
    'apps.experiments',

#3rd party apps
   'django_extensions',
]


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases
# SQLite unless DB_ENGINE names another backend.

DB_ENGINE = os.getenv("DB_ENGINE", "django.db.backends.sqlite3")

if DB_ENGINE.endswith("sqlite3"):
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': os.getenv("DB_NAME") or BASE_DIR / "db.sqlite3",
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': os.getenv("DB_NAME"),
            'USER': os.getenv("DB_USER"),
            'PASSWORD': os.getenv("DB_PASSWORD"),
            'HOST': os.getenv("DB_HOST"),
            'PORT': os.getenv("DB_PORT"),
        }
    }


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = os.getenv("TIME_ZONE", "UTC")

USE_I18N = True

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/4.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ============================================================================
# LOGGING
# ============================================================================

# Standard output carries command results only; library logs go to stderr.
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['stderr'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# ============================================================================
# SOLVER SETTINGS
# ============================================================================

# Artifact root when a command gets no --out
BURGERS_OUTPUT_DIR = Path(os.getenv("BURGERS_OUTPUT_DIR", BASE_DIR / "output"))

# Record every command invocation as a SimulationRun row
BURGERS_RECORD_RUNS = os.getenv("BURGERS_RECORD_RUNS", "True") == "True"

# Progress line cadence (steps) for 2D and coupled marches
BURGERS_PROGRESS_EVERY = int(os.getenv("BURGERS_PROGRESS_EVERY", "500"))
