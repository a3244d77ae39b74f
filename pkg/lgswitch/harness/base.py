"""
Common base of all management commands of the harness.

A `RunCommand` parses the shared options, loads and validates the configuration,
calls `RunCommand.run` and writes the returned result and table. Configuration errors
end the command with exit code 2 and violated invariants with exit code 1.
"""
import logging
from pathlib import Path
from typing import Any, Dict, Tuple

import pandas as pd
from django.conf import settings
from django.core.management import base

from ..lgengine.observables import (
    InvalidBasisError,
    InvalidObservableError,
    InvalidStateError,
    OutcomeIndexError,
    UnsharpnessError,
)
from ..lgengine.quasiprob import WeakValueUndefinedError
from ..lgengine.sequential import IdentityViolationError
from ..linalg.tolerances import Tolerances
from ..loggers import CommandLoggerMixin
from ..search.space import EmptySearchSpaceError
from ..switch.config import KrausCompletenessError, UnnormalizedInputError
from ..switch.simulate import ReadoutError
from .forms import ConfigError, RunConfig, load_config
from .ioports import FORMATS, write_run

logger = logging.getLogger(__name__)

EXIT_INVARIANT = 1
EXIT_CONFIG = 2

CONFIG_ERRORS = (
    ConfigError,
    InvalidStateError,
    InvalidObservableError,
    InvalidBasisError,
    UnsharpnessError,
    OutcomeIndexError,
    UnnormalizedInputError,
    EmptySearchSpaceError,
)
INVARIANT_ERRORS = (
    IdentityViolationError,
    KrausCompletenessError,
    ReadoutError,
    WeakValueUndefinedError,
)


def tolerances() -> Tolerances:
    """Tolerance record with the overrides from ``LGSWITCH_TOLERANCES``."""
    return Tolerances.from_mapping(getattr(settings, "LGSWITCH_TOLERANCES", None))


class RunCommand(CommandLoggerMixin, base.BaseCommand):
    """Base for commands that turn a configuration into result files."""

    def add_arguments(self, parser):
        """Add the options shared by all commands."""
        parser.add_argument(
            "--config", type=Path, default=None,
            help="Path to the YAML run configuration. Defaults apply without it.",
        )
        parser.add_argument(
            "--out", type=Path, default=None,
            help="Output directory. Defaults to the command name in LGSWITCH_OUTPUT_DIR.",
        )
        parser.add_argument(
            "--seed", type=int, default=settings.LGSWITCH_DEFAULT_SEED,
            help="Seed of all random number generators.",
        )
        parser.add_argument(
            "--format", choices=FORMATS, default="both",
            help="Which data files to write.",
        )

    def run(self, config: RunConfig, **options) -> Tuple[Dict[str, Any], pd.DataFrame]:
        """Compute the result and the table of the command."""
        raise NotImplementedError

    def handle(self, *args, **options):
        """Execute command."""
        command = self.__module__.split(".")[-1]
        try:
            config = load_config(options["config"])
            run_options = {k: v for k, v in options.items() if k != "config"}
            result, table = self.run(config, **run_options)
        except CONFIG_ERRORS as config_err:
            raise base.CommandError(str(config_err), returncode=EXIT_CONFIG) from config_err
        except INVARIANT_ERRORS as inv_err:
            raise base.CommandError(str(inv_err), returncode=EXIT_INVARIANT) from inv_err

        out_dir = options["out"] or Path(settings.OUTPUT_DIR) / command
        manifest = write_run(
            out_dir=out_dir,
            command=command,
            config_digest=config.digest,
            result=result,
            table=table,
            fmt=options["format"],
            seed=options["seed"],
        )

        failure = result.get("failure")
        if failure:
            raise base.CommandError(failure, returncode=EXIT_INVARIANT)

        self.stdout.write(self.style.SUCCESS(
            f"{command} wrote {', '.join(manifest.files)} to {out_dir}"
        ))
