import itertools

import numpy as np
import pytest

from lgswitch.lgengine.observables import (
    OUTCOMES,
    DichotomicObservable,
    LGScenario,
    QuantumState,
    UnsharpnessError,
)
from lgswitch.lgengine.sequential import (
    IdentityViolationError,
    anticommutator_correlation,
    luders_joint_prob,
    luders_triple_moment,
    povm_effects,
    sequential_correlation,
    sequential_joint_prob,
    sequential_joint_table,
    sqrt_effect,
)
from lgswitch.linalg.core import SIGMA_X, SIGMA_Z, identity, max_abs_diff
from lgswitch.linalg.tolerances import Tolerances


@pytest.mark.parametrize("lam", [1e-3, 0.3, 1.])
def test_effects_are_complete(dichotomic_observable, lam):
    effects = povm_effects(dichotomic_observable, lam)
    assert max_abs_diff(effects[1] + effects[-1], identity(2)) < 1e-12
    for m in OUTCOMES:
        kraus = sqrt_effect(dichotomic_observable, lam, m)
        assert max_abs_diff(kraus @ kraus, effects[m]) < 1e-12


def test_sharp_effects_are_projectors(dichotomic_observable):
    effects = povm_effects(dichotomic_observable, 1.)
    assert max_abs_diff(effects[1], dichotomic_observable.projector(1)) < 1e-12


@pytest.mark.parametrize("lam", [0., -0.2, 1.5])
def test_invalid_unsharpness(lam):
    with pytest.raises(UnsharpnessError):
        povm_effects(DichotomicObservable.from_angles(0.), lam)


@pytest.mark.parametrize("lam", [0.25, 0.6, 1.])
def test_correlation_scales_with_lambda(lg_scenario, lam):
    """The sequential correlation is (λ/2) Tr[ρ {M_i, M_j}]."""
    scenario = lg_scenario.with_lambda(lam)
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        table = sequential_joint_table(scenario, i, j)
        assert np.isclose(sum(table.values()), 1.)
        correlation = sequential_correlation(scenario, i, j)
        assert np.isclose(correlation, lam * anticommutator_correlation(scenario, i, j))


def test_precession_correlation_is_cosine(quantum_state):
    """For precession of σ_z, the sharp correlation only depends on the angle."""
    scenario = LGScenario.precession(quantum_state, times=(0., 0.4, 1.5))
    assert np.isclose(anticommutator_correlation(scenario, 1, 2), np.cos(0.4))
    assert np.isclose(anticommutator_correlation(scenario, 1, 3), np.cos(1.5))


def test_disagreement_raises(lg_scenario):
    with pytest.raises(IdentityViolationError):
        sequential_correlation(lg_scenario, 1, 2, Tolerances(identity=-1.))


def test_luders_chain(lg_scenario):
    probabilities = [
        luders_joint_prob(lg_scenario, outcomes)
        for outcomes in itertools.product(OUTCOMES, repeat=3)
    ]
    assert min(probabilities) >= -1e-12
    assert np.isclose(sum(probabilities), 1.)
    assert -1. - 1e-12 <= luders_triple_moment(lg_scenario) <= 1. + 1e-12


PLUS_STATE = QuantumState.from_bloch(np.pi / 2., 0.)
ZERO_STATE = QuantumState.from_vector([1., 0.])
HALF_TURNS = (0., np.pi / 2., np.pi)


@pytest.mark.parametrize("m_i, m_j", itertools.product(OUTCOMES, repeat=2))
def test_plus_state_z_then_x(m_i, m_j):
    """After σ_z, the σ_x outcome of |+⟩ is a fair coin."""
    scenario = LGScenario.precession(PLUS_STATE, times=HALF_TURNS)
    assert max_abs_diff(abs(scenario.observable(2).matrix), abs(SIGMA_X)) < 1e-12
    assert np.isclose(sequential_joint_prob(scenario, 1, 2, m_i, m_j), 0.25)


@pytest.mark.parametrize("m_i, m_j, expected", [
    (+1, +1, 1.),
    (+1, -1, 0.),
    (-1, +1, 0.),
    (-1, -1, 0.),
])
def test_repeated_sharp_measurement(m_i, m_j, expected):
    scenario = LGScenario.precession(ZERO_STATE, omega=0.)
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        assert np.isclose(sequential_joint_prob(scenario, i, j, m_i, m_j), expected)


@pytest.mark.parametrize("times", [(0., 0.3, 1.1), HALF_TURNS, (0., 2., 5.)])
def test_maximally_mixed_state(times):
    """Without initial coherence the joint probability is the basis overlap."""
    scenario = LGScenario.precession(QuantumState.maximally_mixed(), times=times)
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        for m_i, m_j in itertools.product(OUTCOMES, repeat=2):
            overlap = abs(np.vdot(scenario.basis(i)[m_i], scenario.basis(j)[m_j])) ** 2
            assert np.isclose(sequential_joint_prob(scenario, i, j, m_i, m_j), overlap / 2.)


@pytest.mark.parametrize("m, diagonal", [(+1, [0.75, 0.25]), (-1, [0.25, 0.75])])
def test_half_unsharp_effects(m, diagonal):
    effects = povm_effects(DichotomicObservable(SIGMA_Z), 0.5)
    assert max_abs_diff(effects[m], np.diag(diagonal)) < 1e-12


@pytest.mark.parametrize("m_i, m_j, expected", [
    (+1, +1, 0.75),
    (+1, -1, 0.),
    (-1, +1, 0.),
    (-1, -1, 0.25),
])
def test_half_unsharp_repeated_measurement(m_i, m_j, expected):
    scenario = LGScenario.precession(ZERO_STATE, omega=0., lam=0.5)
    assert np.isclose(sequential_joint_prob(scenario, 1, 2, m_i, m_j), expected)
