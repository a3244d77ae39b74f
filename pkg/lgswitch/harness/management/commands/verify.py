"""
Run the invariant suite over built-in and seeded random scenarios and print the
largest residual of every check. Fails with exit code 1 if any check fails.
"""
from dataclasses import asdict

import pandas as pd
from django.conf import settings

from lgswitch.harness.base import RunCommand, tolerances
from lgswitch.harness.checks import run_checks


class Command(RunCommand):
    """Run the invariant suite."""
    help = __doc__

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--samples", type=int, default=settings.LGSWITCH_VERIFY_SAMPLES,
            help="Number of random scenarios per check.",
        )

    def run(self, config, **options):
        results = run_checks(options["samples"], options["seed"], tolerances())

        for check in results:
            status = self.style.SUCCESS("PASS") if check.passed else self.style.ERROR("FAIL")
            relation = ">=" if check.minimum else "<="
            self.stdout.write(
                f"{status} {check.name:<28} {check.max_residual:.3e} "
                f"{relation} {check.tolerance:.1e}"
            )

        failed = [check.name for check in results if not check.passed]
        result = {
            "samples": options["samples"],
            "seed": options["seed"],
            "passed": not failed,
            "checks": [asdict(check) for check in results],
        }
        if failed:
            result["failure"] = f"{len(failed)} checks failed: {', '.join(failed)}"
        return result, pd.DataFrame([check.as_row() for check in results])
