"""
Evaluate every sign pattern of the G2, K3 and G3 inequalities and of the combination
of two three-time quasiprobabilities, each flagged as violated or satisfied.
"""
from dataclasses import asdict

import pandas as pd

from lgswitch.harness.base import RunCommand, tolerances
from lgswitch.lgengine.inequalities import (
    COMBO_PATTERNS,
    FAMILIES,
    combo_values,
    inequality_table,
    moments,
)


class Command(RunCommand):
    """Evaluate all Leggett-Garg inequalities of a scenario."""
    help = __doc__

    def run(self, config, **options):
        scenario = config.scenario()
        rows = inequality_table(scenario, tolerances())
        mom = moments(scenario)

        combos = []
        for signs in COMBO_PATTERNS:
            combo = combo_values(mom, *signs)
            combos.append({
                "signs": list(signs),
                **asdict(combo),
                "total": combo.total,
                "both_negative": combo.both_negative,
            })

        violations = {
            family: sum(row["violated"] for row in rows if row["family"] == family)
            for family in FAMILIES
        }
        result = {
            "rows": rows,
            "violations": violations,
            "violated": any(violations.values()),
            "combos": combos,
        }
        for family, count in violations.items():
            if count:
                self.logger.info(f"{family} is violated in {count} sign patterns")
        return result, pd.DataFrame(rows)
