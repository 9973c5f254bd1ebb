# config/settings.py
"""
Django settings for the turbulent-channel Bell simulator.

Everything tunable is read from the environment (optionally through a
``.env`` file at the project root). See ``.env.example`` for the keys.
"""

import os
from pathlib import Path
from dotenv import load_dotenv


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(os.path.join(BASE_DIR, ".env"))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv("SECRET_KEY", "bellsim-local-development-key")

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.getenv("DEBUG", "False") == "True"

ALLOWED_HOSTS = []


# ==========================================================
# SIMULATOR DEFAULTS
# ==========================================================

BELLSIM_DEFAULT_SAMPLES = int(os.getenv("BELLSIM_DEFAULT_SAMPLES", "100000"))
BELLSIM_DEFAULT_SEED = int(os.getenv("BELLSIM_DEFAULT_SEED", "20170101"))

# Samples are drawn in fixed-size chunks, each with its own derived seed,
# so a run is reproducible regardless of how many workers evaluate it.
BELLSIM_CHUNK_SIZE = int(os.getenv("BELLSIM_CHUNK_SIZE", "65536"))
BELLSIM_WORKERS = int(os.getenv("BELLSIM_WORKERS", "1"))

BELLSIM_ORACLE_TAIL_TOLERANCE = float(
    os.getenv("BELLSIM_ORACLE_TAIL_TOLERANCE", "1e-8")
)

BELLSIM_RECORD_RUNS = os.getenv("BELLSIM_RECORD_RUNS", "False") == "True"

BELLSIM_PRESETS_DIR = Path(
    os.getenv("BELLSIM_PRESETS_DIR", BASE_DIR / "simulations" / "presets")
)

BELLSIM_LOG_LEVEL = os.getenv("BELLSIM_LOG_LEVEL", "INFO")


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'atmosphere',
    'photocount',
    'chsh',
    'fockoracle',
    'simulations',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
]

ROOT_URLCONF = 'config.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]


# Database (run ledger only)

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# ==========================================================
# LOGGING
# ==========================================================

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{asctime} {levelname} {name} | {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        name: {
            "handlers": ["console"],
            "level": BELLSIM_LOG_LEVEL,
            "propagate": False,
        }
        for name in (
            "core",
            "atmosphere",
            "photocount",
            "chsh",
            "fockoracle",
            "simulations",
        )
    },
}


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
