"""
Named objectives. Each maps a scenario to the smallest value of one quantity over its
sign patterns, so that minimizing the objective searches for negativity.
"""
from typing import Callable, Dict

from ..lgengine.inequalities import family_values, moments
from ..lgengine.observables import LGScenario
from ..lgengine.quasiprob import scenario_triple_table, scenario_two_time_table

Objective = Callable[[LGScenario], float]


def min_q2(scenario: LGScenario) -> float:
    """Smallest two-time quasiprobability of the pair (1, 2)."""
    return scenario_two_time_table(scenario, 1, 2).minimum


def min_q3(scenario: LGScenario) -> float:
    """Smallest three-time quasiprobability."""
    return scenario_triple_table(scenario).minimum


def _family_minimum(family: str) -> Objective:
    def objective(scenario: LGScenario) -> float:
        return min(family_values(moments(scenario), family).values())

    objective.__name__ = f"min_{family.lower()}"
    objective.__doc__ = f"Smallest {family} value over all sign patterns."
    return objective


min_g2 = _family_minimum("G2")
min_k3 = _family_minimum("K3")
min_g3 = _family_minimum("G3")
min_g3_standard = _family_minimum("G3_standard")
min_combo = _family_minimum("combo")

OBJECTIVES: Dict[str, Objective] = {
    "min_q2": min_q2,
    "min_g2": min_g2,
    "min_k3": min_k3,
    "min_g3": min_g3,
    "min_g3_standard": min_g3_standard,
    "min_q3": min_q3,
    "min_combo": min_combo,
}


def get_objective(name: str) -> Objective:
    """Look up an objective by name."""
    try:
        return OBJECTIVES[name]
    except KeyError as key_err:
        raise ValueError(
            f"Unknown objective {name!r}, choose from {sorted(OBJECTIVES)}"
        ) from key_err
