"""
Django settings for the stwa project.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'stwa-local-only')

DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS = []

# Application definition
DJANGO_APPS = [
    'django.contrib.contenttypes',
]

LOCAL_APPS = [
    'strcore',
    'bitvec',
    'nested_pred',
    'suffix_tree',
    'tree_tools',
    'long_retrieval',
    'wa_index',
    'textsearch',
    'cli',
]

INSTALLED_APPS = DJANGO_APPS + LOCAL_APPS

# Database Configuration (only the build registry lives here)
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.getenv('STWA_DB_PATH', BASE_DIR / 'db.sqlite3'),
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Index tunables
STWA = {
    'WORD_BITS': 64,
    'RANK_SELECT_DEPTH': int(os.getenv('STWA_RANK_SELECT_DEPTH', '2')),
    'COMPACT_PISNS_DEPTH': int(os.getenv('STWA_COMPACT_PISNS_DEPTH', '1')),
    'ALPHAS': tuple(range(8, 16)),
    'SHORT_QUERY_LIMIT': 6,
    'MARK_DENSITY_FACTOR': int(os.getenv('STWA_MARK_DENSITY_FACTOR', '8')),
    'MICRO_TREE_LIMIT': 64,
    'SHOW_PROGRESS': os.getenv('STWA_SHOW_PROGRESS', 'True').lower() == 'true',
    'QUERY_WORKERS': int(os.getenv('STWA_QUERY_WORKERS', '1')),
    # probes per query, standard words per n*log2(n), compact words per n,
    # compact words per length against n/W + n/l + s_l
    'PROBE_BOUND': 64,
    'STANDARD_SPACE_FACTOR': 4096,
    'COMPACT_SPACE_FACTOR': 4096,
    'COMPACT_LENGTH_FACTOR': 256,
}

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'INFO',
    },
    'loggers': {
        name: {'level': os.getenv('STWA_LOG_LEVEL', 'WARNING')}
        for name in LOCAL_APPS + ['stwa']
    },
}
