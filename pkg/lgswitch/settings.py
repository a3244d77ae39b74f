"""
Django settings module that defines the configuration of the command-line tools. For
an explanation of the Django-specific values, see the official `Django documentation`_.

There is no database and no web front end: Django is used for its settings, its
logging configuration, its forms (to validate run configurations) and its management
commands. The few values that may need changing are fetched from environment
variables, all of which have sensible defaults:

- `DJANGO_ENV` can take on the values `"debug"` or `"production"`.
- `DJANGO_LOG_LEVEL` for the log level. This only has an effect in debug mode.
- `LGSWITCH_OUTPUT_DIR` is the directory under which run directories are created.

.. _Django documentation: https://docs.djangoproject.com/en/4.1/ref/settings/
"""
import os
from pathlib import Path

try:
    from ._version import version
except ImportError:
    version = "0.0.0+unknown"

DEBUG = os.getenv("DJANGO_ENV", "production") == "debug"
"""``True``, when in debug mode, meaning ``DJANGO_ENV`` is set to ``"debug"``."""

LOG_LEVEL = os.getenv("DJANGO_LOG_LEVEL", "INFO") if DEBUG else "WARNING"
"""
Set the threshold for logging events when in `DEBUG` mode. Otherwise this is fixed
to ``"WARNING"``. Set via the environment variable ``DJANGO_LOG_LEVEL``.
"""

SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "lgswitch-cli-has-no-secrets")
"""Required by Django. Nothing in the command-line tools signs or encrypts data."""

BASE_DIR = Path(__file__).resolve().parent.parent

VERSION = version
"""Artifact version written into every run manifest."""

OUTPUT_DIR = Path(os.getenv("LGSWITCH_OUTPUT_DIR", BASE_DIR / "runs"))
"""Default root for run directories when a command is called without ``--out``."""

LGSWITCH_TOLERANCES = {
    "identity": 1e-12,
    "pipeline": 1e-10,
    "overlap": 1e-12,
}
"""
Overrides for the fields of `lgswitch.linalg.tolerances.Tolerances`. Identities of
single operators are checked against ``identity``, results of chained interferometer
or search pipelines against ``pipeline``, and vanishing overlaps against ``overlap``.
"""

LGSWITCH_FLOAT_FORMAT = "%.12g"
"""Format of every float written to CSV or JSON output (12 significant digits)."""

LGSWITCH_DEFAULT_SEED = 42
"""Seed used by ``verify`` and ``sweep`` when none is passed via ``--seed``."""

LGSWITCH_VERIFY_SAMPLES = 1000
"""Number of randomized scenarios the ``verify`` command sweeps by default."""


# Logging
def set_LOGGING(LOG_LEVEL):
    """Return logging settings in the form of a dictionary as function of the
    log-level. This is used so that a derived settings file can call the function
    again to overwrite the logging settings easily.
    """
    LOGGING = {
        "version": 1,
        "disable_existing_loggers": False,

        "formatters": {
            "default": {
                "format": "[%(asctime)s] %(levelname)-10s %(name)-40s %(message)s"
            }
        },

        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "default",
            },
        },

        "root": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
        },

        "loggers": {
            "django": {
                "level": LOG_LEVEL,
                "handlers": ["console"],
                "propagate": False,
            },
            "lgswitch": {
                "level": LOG_LEVEL,
                "handlers": ["console"],
                "propagate": False,
            },
        }
    }
    return LOGGING

LOGGING = set_LOGGING(LOG_LEVEL)


# Application definition
INSTALLED_APPS = [
    "lgswitch.linalg.apps.LinalgConfig",
    "lgswitch.lgengine.apps.LGEngineConfig",
    "lgswitch.switch.apps.SwitchAppConfig",
    "lgswitch.search.apps.SearchConfig",
    "lgswitch.harness.apps.HarnessConfig",
]

DATABASES = {}
"""Results are persisted as flat files, see `lgswitch.harness.ioports`."""

USE_TZ = True
TIME_ZONE = "UTC"
