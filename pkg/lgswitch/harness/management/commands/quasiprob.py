"""
Compute the two-time and three-time quasiprobability tables of a scenario, with their
marginals and negativity flags.
"""
import pandas as pd

from lgswitch.harness.base import RunCommand, tolerances
from lgswitch.lgengine.quasiprob import (
    PAIRS,
    nsit_check_two_time,
    scenario_triple_table,
    scenario_two_time_table,
    triple_form_discrepancy,
    triple_marginals,
)


class Command(RunCommand):
    """Compute the two-time and three-time quasiprobability tables of a scenario."""
    help = __doc__

    def run(self, config, **options):
        tol = tolerances()
        scenario = config.scenario()
        result, rows = {"two_time": {}}, []

        for i, j in PAIRS:
            table = scenario_two_time_table(scenario, i, j)
            pair = f"{i}{j}"
            result["two_time"][pair] = {
                "rows": table.records(),
                "total": table.total,
                "negative": table.is_negative,
                "nsit": nsit_check_two_time(scenario, i, j).as_dict(),
            }
            rows += [{"order": 2, "pair": pair, **row} for row in table.records()]

        triple = scenario_triple_table(scenario)
        marginals = triple_marginals(scenario.initial, scenario.bases, triple, tol)
        result["three_time"] = {
            "rows": triple.records(),
            "total": triple.total,
            "negative": triple.is_negative,
            "marginals": marginals.as_dict(),
        }
        if scenario.initial.is_pure:
            discrepancy = triple_form_discrepancy(scenario.initial, scenario.bases, tol)
            result["three_time"]["pure_form"] = {
                "max_residual": discrepancy.max_residual,
                "agrees": discrepancy.agrees,
                "skipped_m3": list(discrepancy.skipped),
            }
        rows += [{"order": 3, "pair": "123", **row} for row in triple.records()]

        columns = ["order", "pair", "m1", "m2", "m3", "q", "k_real", "k_imag", "negative"]
        table = pd.DataFrame(rows).reindex(columns=columns)
        table["m3"] = table["m3"].astype("Int64")
        self.logger.info(f"Three-time table sums to {triple.total:.12g}")
        return result, table
