"""
Django settings for PCS project.

PCS computes persistent cohomology of filtrations together with its
algebraic structure (cup products, transferred A-infinity operations,
mod-2 Steenrod squares) and certified bounds for the structure-aware
interleaving distances. There is no web surface: the project is driven
through management commands.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used to satisfy Django's startup checks; nothing is signed.
SECRET_KEY = os.environ.get('PCS_SECRET_KEY', 'pcs-local-computation-only')

DEBUG = os.environ.get('PCS_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Computation apps
    'complexes',     # Point clouds, Rips/Cech filtrations, filtration files
    'chains',        # Field arithmetic, sparse matrices, (co)chains, cup / cup-i
    'contraction',   # Incremental contraction (transfer data) per stage
    'ainfty',        # Transferred A-infinity structures, Massey products
    'steenrod',      # Mod-2 Steenrod squares, Adem relations
    'distances',     # Barcodes, ledgers, bounds on refined distances
    # Command-line surface
    'runs',          # Management commands and the run audit trail
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# https://docs.djangoproject.com/en/5.2/topics/logging/

PCS_LOG_LEVEL = os.environ.get('PCS_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': PCS_LOG_LEVEL,
            'propagate': False,
        }
        for app in ('complexes', 'chains', 'contraction', 'ainfty',
                    'steenrod', 'distances', 'runs')
    },
}


# Computation defaults

# Field characteristic: a prime, or 0 for exact rationals
PCS_FIELD_CHARACTERISTIC = 2

# Highest arity of transferred operations m_n (2..5)
PCS_MAX_ARITY = 3

# Absolute tolerance for endpoint arithmetic
PCS_TOLERANCE = 1e-9

# Backtracking nodes per feasibility search before reporting inconclusive
PCS_SEARCH_NODE_BUDGET = 200000

# Cech construction is refused beyond this ambient dimension
PCS_CECH_MAX_DIMENSION = 8

# Primes combined into d_P (the characteristic-0 bound is always added)
PCS_PRIME_SET = [2, 3]

# Seed for jitter and randomised property suites
PCS_DEFAULT_SEED = 20240601

# Scale convention of Rips parameters: 'diameter' or 'radius'
PCS_CONVENTION = 'diameter'

# Where commands write diagrams, SVGs and reports
PCS_OUTPUT_DIR = BASE_DIR / 'output'
