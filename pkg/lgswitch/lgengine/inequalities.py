"""
Leggett-Garg inequality families of a three-time scenario. Macrorealism predicts every
one of these quantities to be nonnegative:

-   ``G2 = 1 + m_i⟨M_i⟩ + m_j⟨M_j⟩ + m_i m_j ⟨M_i M_j⟩``, four times the two-time
    quasiprobability,
-   ``K₃ = 1 + m₁m₂⟨M₁M₂⟩ + m₂m₃⟨M₂M₃⟩ + m₁m₃⟨M₁M₃⟩``,
-   ``G₃ = ⅛(1 + c Σ m_i⟨M_i⟩ + Σ m_i m_j⟨M_i M_j⟩ + m₁m₂m₃⟨M₁M₂M₃⟩)`` with the
    single-moment coefficient ``c`` (3 by default; ``c = 1`` reproduces the three-time
    quasiprobability),
-   the sum ``q(m_i, -m_j, m_k) + q(-m_i, m_j, -m_k)`` of two three-time
    quasiprobabilities.

Pair correlations are the sharp symmetrized ones, the triple moment is taken from the
three-time quasiprobability. `moments` collects everything once, so that
`inequality_table` evaluates all families from a single pass.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..linalg.tolerances import DEFAULT_TOLERANCES, Tolerances
from .observables import OUTCOMES, LGScenario, check_outcome, check_time_pair
from .quasiprob import PAIRS, QuasiprobTable, scenario_triple_table
from .sequential import anticommutator_correlation

logger = logging.getLogger(__name__)

K3_PATTERNS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))
"""Sign patterns of K₃ up to a global sign, which leaves K₃ unchanged."""

COMBO_PATTERNS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1))
"""Sign triples of the combination, up to the global flip that swaps its terms."""

DEFAULT_SINGLE_COEFFICIENT = 3.


@dataclass(frozen=True)
class ScenarioMoments:
    """Single moments, sharp pair correlations and the three-time table."""
    means: Dict[int, float]
    correlations: Dict[Tuple[int, int], float]
    triple_table: QuasiprobTable

    @property
    def triple_moment(self) -> float:
        """``⟨M₁M₂M₃⟩ = Σ m₁m₂m₃ q(m₁, m₂, m₃)``."""
        return self.triple_table.moment((1, 2, 3))


def moments(scenario: LGScenario) -> ScenarioMoments:
    """Evaluate all moments of ``scenario`` at once."""
    return ScenarioMoments(
        means={
            i: scenario.initial.born(scenario.observable(i).matrix) for i in (1, 2, 3)
        },
        correlations={
            pair: anticommutator_correlation(scenario, *pair) for pair in PAIRS
        },
        triple_table=scenario_triple_table(scenario),
    )


def _g2(mom: ScenarioMoments, i: int, j: int, m_i: int, m_j: int) -> float:
    return (
        1.
        + m_i * mom.means[i]
        + m_j * mom.means[j]
        + m_i * m_j * mom.correlations[(i, j)]
    )


def _k3(c: Dict[Tuple[int, int], float], m1: int, m2: int, m3: int) -> float:
    return 1. + m1 * m2 * c[(1, 2)] + m2 * m3 * c[(2, 3)] + m1 * m3 * c[(1, 3)]


def _g3(
    mom: ScenarioMoments,
    m1: int,
    m2: int,
    m3: int,
    single_coefficient: float,
) -> float:
    signs = {1: m1, 2: m2, 3: m3}
    singles = sum(signs[i] * mom.means[i] for i in (1, 2, 3))
    pairs = sum(signs[i] * signs[j] * mom.correlations[(i, j)] for i, j in PAIRS)
    return (
        1. + single_coefficient * singles + pairs + m1 * m2 * m3 * mom.triple_moment
    ) / 8.


def g2(scenario: LGScenario, i: int, j: int, m_i: int, m_j: int) -> float:
    """Two-time inequality value for the pair ``i < j``."""
    check_time_pair(i, j)
    check_outcome(m_i)
    check_outcome(m_j)
    return _g2(moments(scenario), i, j, m_i, m_j)


def k3(scenario: LGScenario, m1: int, m2: int, m3: int) -> float:
    """Three-time inequality value ``K₃``."""
    for m in (m1, m2, m3):
        check_outcome(m)
    correlations = {
        pair: anticommutator_correlation(scenario, *pair) for pair in PAIRS
    }
    return _k3(correlations, m1, m2, m3)


def g3(
    scenario: LGScenario,
    m1: int,
    m2: int,
    m3: int,
    single_coefficient: float = DEFAULT_SINGLE_COEFFICIENT,
) -> float:
    """Three-time moment inequality ``G₃``.

    With ``single_coefficient=1`` the value coincides with the three-time
    quasiprobability ``q(m₁, m₂, m₃)``.
    """
    for m in (m1, m2, m3):
        check_outcome(m)
    return _g3(moments(scenario), m1, m2, m3, single_coefficient)


@dataclass(frozen=True)
class ComboResult:
    """The two quasiprobabilities of the combination and their sum."""
    first: float
    """``q(m_i, -m_j, m_k)``"""
    second: float
    """``q(-m_i, m_j, -m_k)``"""
    k3: float
    """``K₃(m_i, -m_j, m_k)``, which equals four times the sum."""

    @property
    def total(self) -> float:
        return self.first + self.second

    @property
    def both_negative(self) -> bool:
        return self.first < 0. and self.second < 0.


def combo_values(mom: ScenarioMoments, m_i: int, m_j: int, m_k: int) -> ComboResult:
    table = mom.triple_table
    return ComboResult(
        first=table[(m_i, -m_j, m_k)],
        second=table[(-m_i, m_j, -m_k)],
        k3=_k3(mom.correlations, m_i, -m_j, m_k),
    )


def combo_inequality(scenario: LGScenario, m_i: int, m_j: int, m_k: int) -> ComboResult:
    """Combination of two three-time quasiprobabilities. Both being negative
    signals a violation of the three-time inequality."""
    for m in (m_i, m_j, m_k):
        check_outcome(m)
    result = combo_values(moments(scenario), m_i, m_j, m_k)
    if result.both_negative:
        logger.info(f"Both quasiprobabilities of ({m_i}, {m_j}, {m_k}) are negative")
    return result


FAMILIES = ("G2", "K3", "G3", "G3_standard", "combo")


def _signs_label(signs: tuple) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def family_values(mom: ScenarioMoments, family: str) -> Dict[str, float]:
    """All sign patterns of one inequality family, keyed by a label such as
    ``"12:+-"`` (G2, with the pair) or ``"+-+"``."""
    if family == "G2":
        return {
            f"{i}{j}:{_signs_label(signs)}": _g2(mom, i, j, *signs)
            for i, j in PAIRS
            for signs in itertools.product(OUTCOMES, repeat=2)
        }
    if family == "K3":
        return {
            _signs_label(signs): _k3(mom.correlations, *signs) for signs in K3_PATTERNS
        }
    if family in ("G3", "G3_standard"):
        coefficient = DEFAULT_SINGLE_COEFFICIENT if family == "G3" else 1.
        return {
            _signs_label(signs): _g3(mom, *signs, coefficient)
            for signs in itertools.product(OUTCOMES, repeat=3)
        }
    if family == "combo":
        return {
            _signs_label(signs): combo_values(mom, *signs).total for signs in COMBO_PATTERNS
        }
    raise ValueError(f"Unknown inequality family {family!r}, choose from {FAMILIES}")


def inequality_table(
    scenario: LGScenario,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> List[dict]:
    """Every sign pattern of every family as one row with a ``violated`` flag.

    A value counts as violating when it lies below ``-tol.identity``.
    """
    mom = moments(scenario)
    rows = []
    for family in FAMILIES:
        for label, value in family_values(mom, family).items():
            pair, _, signs = label.rpartition(":")
            rows.append({
                "family": family,
                "pair": pair,
                "signs": signs,
                "value": float(value),
                "violated": bool(value < -tol.identity),
            })

    violated = sum(row["violated"] for row in rows)
    logger.debug(f"Inequality table has {len(rows)} rows, {violated} violated")
    return rows
