"""
Random survey of scenarios testing two claims about the inequality families:

1.  Whenever both quasiprobabilities of a combination are negative, some sign pattern
    of ``K₃`` is violated. A scenario where this fails is a counterexample.
2.  ``G₃`` can be violated while every ``G2`` and every ``K₃`` holds. A scenario where
    this happens is a witness.
"""
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..lgengine.inequalities import COMBO_PATTERNS, combo_values, family_values, moments
from ..linalg.tolerances import DEFAULT_TOLERANCES, Tolerances
from .space import SearchSpace

logger = logging.getLogger(__name__)

SURVEY_PARAMETERS = ("state_theta", "state_phi", "purity", "axis_theta", "axis_phi",
                     "theta12", "theta23")
DEFAULT_MAX_RECORDS = 20


def default_survey_space() -> SearchSpace:
    """Random mixed states, random precession axes and random evolution angles."""
    return SearchSpace.from_names(SURVEY_PARAMETERS)


@dataclass
class Witness:
    """Parameters of a scenario singled out by the survey, with its key values."""
    params: Dict[str, float]
    values: Dict[str, float]


@dataclass
class SurveyReport:
    samples: int
    seed: int
    combo_both_negative: int = 0
    """Number of (scenario, pattern) pairs with both quasiprobabilities negative."""
    counterexamples: List[Witness] = field(default_factory=list)
    g3_witness_count: int = 0
    g3_witnesses: List[Witness] = field(default_factory=list)
    g3_standard_witness_count: int = 0
    g3_standard_witnesses: List[Witness] = field(default_factory=list)

    @property
    def implication_holds(self) -> bool:
        return not self.counterexamples

    @property
    def g3_only_violation_found(self) -> bool:
        return self.g3_witness_count > 0

    def as_dict(self) -> dict:
        return {
            **asdict(self),
            "implication_holds": self.implication_holds,
            "g3_only_violation_found": self.g3_only_violation_found,
        }


def implication_survey(
    space: Optional[SearchSpace] = None,
    samples: int = 10_000,
    seed: int = 42,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_records: int = DEFAULT_MAX_RECORDS,
) -> SurveyReport:
    """Sample ``samples`` scenarios from ``space`` with a generator seeded by ``seed``.

    Counterexamples are all recorded, witnesses only up to ``max_records`` (their
    total number is counted regardless). Values below ``-tol.identity`` count as
    negative.
    """
    if samples < 1:
        raise ValueError(f"A survey needs at least one sample, got {samples}")
    space = space or default_survey_space()
    space.check_nonempty()
    rng = np.random.default_rng(seed)
    report = SurveyReport(samples=samples, seed=seed)
    threshold = -tol.identity

    start_time = time.perf_counter()
    for _ in range(samples):
        params = space.sample(rng)
        mom = moments(space.scenario(params))
        min_g2 = min(family_values(mom, "G2").values())
        min_k3 = min(family_values(mom, "K3").values())

        for signs in COMBO_PATTERNS:
            combo = combo_values(mom, *signs)
            if combo.first < threshold and combo.second < threshold:
                report.combo_both_negative += 1
                if min_k3 >= threshold:
                    report.counterexamples.append(Witness(params, {
                        "first": combo.first,
                        "second": combo.second,
                        "min_k3": min_k3,
                    }))

        if min_g2 < threshold or min_k3 < threshold:
            continue
        for family, count, records in (
            ("G3", "g3_witness_count", report.g3_witnesses),
            ("G3_standard", "g3_standard_witness_count", report.g3_standard_witnesses),
        ):
            min_g3 = min(family_values(mom, family).values())
            if min_g3 < threshold:
                setattr(report, count, getattr(report, count) + 1)
                if len(records) < max_records:
                    records.append(Witness(params, {
                        "min_g3": min_g3, "min_g2": min_g2, "min_k3": min_k3,
                    }))

    end_time = time.perf_counter()
    logger.info(
        f"Survey of {samples} scenarios took {end_time - start_time:.2f} seconds: "
        f"{len(report.counterexamples)} counterexamples, "
        f"{report.g3_witness_count} G3 witnesses"
    )
    if report.counterexamples:
        logger.warning(f"Found {len(report.counterexamples)} counterexamples")
    return report
