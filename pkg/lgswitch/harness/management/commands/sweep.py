"""
Search the scenario family for the minimum of an objective with a grid sweep followed
by pattern-search refinement, and optionally survey random scenarios.
"""
import pandas as pd

from lgswitch.harness.base import RunCommand, tolerances
from lgswitch.search.optimize import revalidate, sweep_and_refine
from lgswitch.search.survey import implication_survey


class Command(RunCommand):
    """Minimize an objective over the scenario family."""
    help = __doc__

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--survey", action="store_true",
            help="Also run the implication survey of the survey section.",
        )

    def run(self, config, **options):
        tol = tolerances()
        section = config["sweep"]
        space = config.search_space()

        search = sweep_and_refine(
            space,
            section["objective"],
            section["resolution"],
            step=section["step"],
            tol=section["tol"],
            budget=section["budget"],
            keep_grid=True,
        )
        grid = search.grid
        search.grid = []
        result = {
            "search": search.as_dict(),
            "free": space.names,
            "equal_spacing": space.equal_spacing,
            "revalidation_residual": revalidate(search, space, tol),
        }
        if not search.converged:
            self.logger.warning("Refinement did not converge, see the converged flag")

        if options["survey"]:
            survey = config["survey"]
            survey_space = config.survey_space()
            report = implication_survey(
                survey_space,
                samples=survey["samples"],
                seed=options["seed"],
                tol=tol,
                max_records=survey["max_records"],
            )
            result["survey"] = {**report.as_dict(), "free": survey_space.names}
            if not report.implication_holds:
                result["failure"] = (
                    f"{len(report.counterexamples)} counterexamples to the "
                    f"combination implication"
                )

        return result, pd.DataFrame(grid, columns=[*space.names, "value"])
