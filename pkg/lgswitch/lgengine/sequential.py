"""
Statistics of sequential measurements of dichotomic observables.

The earlier measurement of a pair may be unsharp. Its effects are

    E^± = (1 ± λ)/2 π_± + (1 ∓ λ)/2 π_∓,

and the state is updated with the Kraus operator ``√E`` before the later, sharp
measurement. The resulting correlation is ``(λ/2) Tr[ρ {M_i, M_j}]``, which
`sequential_correlation` computes both from the joint probabilities and from the
anticommutator and then checks for agreement.

A Lüders chain of three sharp measurements is provided for comparison with the
three-time quasiprobability moments.
"""
import itertools
import logging
from typing import Dict, Optional, Tuple

import numpy as np

from ..linalg.core import CMatrix, anticommutator, expectation
from ..linalg.tolerances import DEFAULT_TOLERANCES, Tolerances
from .observables import (
    OUTCOMES,
    DichotomicObservable,
    LGScenario,
    UnsharpnessError,
    check_outcome,
    check_time_pair,
)

logger = logging.getLogger(__name__)


class IdentityViolationError(ArithmeticError):
    """Raised when two independent evaluations of the same quantity disagree."""


def _check_lambda(lam: float) -> float:
    if not 0. < lam <= 1.:
        raise UnsharpnessError(f"Unsharpness must lie in (0, 1], got {lam}")
    return lam


def povm_effects(obs: DichotomicObservable, lam: float) -> Dict[int, CMatrix]:
    """Return the unsharp effects ``{+1: E^+, -1: E^-}`` of ``obs``.

    >>> effects = povm_effects(DichotomicObservable.from_angles(0.), 0.5)
    >>> np.real(np.diag(effects[+1])).tolist()
    [0.75, 0.25]
    """
    _check_lambda(lam)
    return {
        m: (1. + lam) / 2. * obs.projector(m) + (1. - lam) / 2. * obs.projector(-m)
        for m in OUTCOMES
    }


def sqrt_effect(obs: DichotomicObservable, lam: float, m: int) -> CMatrix:
    """Kraus operator ``√E^m``, diagonal in the eigenbasis of ``obs``."""
    _check_lambda(lam)
    check_outcome(m)
    return (
        np.sqrt((1. + lam) / 2.) * obs.projector(m)
        + np.sqrt((1. - lam) / 2.) * obs.projector(-m)
    )


def sequential_joint_prob(
    scenario: LGScenario,
    i: int,
    j: int,
    m_i: int,
    m_j: int,
) -> float:
    """Probability ``Tr[√E ρ √E Π]`` of obtaining ``m_i`` in the (possibly unsharp)
    measurement at ``t_i`` and ``m_j`` in the sharp measurement at ``t_j``."""
    check_time_pair(i, j)
    check_outcome(m_j)
    kraus = sqrt_effect(scenario.observable(i), scenario.lam, m_i)
    updated = kraus @ scenario.initial.rho @ kraus.conj().T
    return float(np.real(expectation(scenario.observable(j).projector(m_j), updated)))


def sequential_joint_table(
    scenario: LGScenario,
    i: int,
    j: int,
) -> Dict[Tuple[int, int], float]:
    """All four joint probabilities of the pair ``(i, j)``."""
    return {
        (m_i, m_j): sequential_joint_prob(scenario, i, j, m_i, m_j)
        for m_i, m_j in itertools.product(OUTCOMES, repeat=2)
    }


def anticommutator_correlation(
    scenario: LGScenario,
    i: int,
    j: int,
    lam: Optional[float] = None,
) -> float:
    """Closed form ``(λ/2) Tr[ρ {M_i, M_j}]`` of the sequential correlation.

    Without an explicit ``lam`` the sharp value ``λ = 1`` is used, which is the
    correlation entering all inequalities.
    """
    check_time_pair(i, j)
    lam = 1. if lam is None else _check_lambda(lam)
    pair = anticommutator(scenario.observable(i).matrix, scenario.observable(j).matrix)
    return lam / 2. * float(np.real(expectation(pair, scenario.initial.rho)))


def sequential_correlation(
    scenario: LGScenario,
    i: int,
    j: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Correlation ``Σ m_i m_j P(m_i, m_j)`` of the sequential measurement.

    The value is cross-checked against `anticommutator_correlation` at the
    scenario's unsharpness and an `IdentityViolationError` is raised if the two
    disagree by more than the identity tolerance.
    """
    from_joints = sum(
        m_i * m_j * p for (m_i, m_j), p in sequential_joint_table(scenario, i, j).items()
    )
    closed_form = anticommutator_correlation(scenario, i, j, lam=scenario.lam)
    residual = abs(from_joints - closed_form)
    if residual > tol.identity:
        raise IdentityViolationError(
            f"Sequential correlation ({i}, {j}) is {from_joints} from joint "
            f"probabilities but {closed_form} from the anticommutator"
        )
    return float(from_joints)


def luders_joint_prob(scenario: LGScenario, outcomes: Tuple[int, int, int]) -> float:
    """Probability of ``(m1, m2, m3)`` for three sharp measurements with Lüders
    state update, ``Tr[π3 π2 π1 ρ π1 π2]``."""
    m1, m2, m3 = (check_outcome(m) for m in outcomes)
    chain = (
        scenario.observable(2).projector(m2) @ scenario.observable(1).projector(m1)
    )
    updated = chain @ scenario.initial.rho @ chain.conj().T
    return float(np.real(expectation(scenario.observable(3).projector(m3), updated)))


def luders_triple_moment(scenario: LGScenario) -> float:
    """``Σ m1 m2 m3 P(m1, m2, m3)`` of the Lüders chain, for comparison only."""
    return float(sum(
        m1 * m2 * m3 * luders_joint_prob(scenario, (m1, m2, m3))
        for m1, m2, m3 in itertools.product(OUTCOMES, repeat=3)
    ))
