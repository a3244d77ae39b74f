import itertools

import numpy as np
import pytest

from lgswitch.lgengine.observables import (
    OUTCOMES,
    DichotomicObservable,
    InvalidStateError,
    LGScenario,
    OutcomeIndexError,
    QuantumState,
)
from lgswitch.lgengine.quasiprob import (
    PAIRS,
    QuasiprobTable,
    WeakValueUndefinedError,
    mh_quasiprob,
    nsit_check_two_time,
    quasiprob_moment_form,
    scenario_triple_table,
    scenario_two_time_table,
    triple_correlations,
    triple_form_discrepancy,
    triple_marginals,
    triple_quasiprob,
    triple_quasiprob_pure_form,
    two_time_table,
    weak_value_projector,
)
from lgswitch.lgengine.sequential import anticommutator_correlation
from lgswitch.switch.config import PLUS


@pytest.fixture
def negative_pair():
    """State ``|0⟩`` with two observables 120° apart, where ``q(+1, +1) = -1/8``."""
    state = QuantumState.from_vector([1., 0.])
    basis_i = DichotomicObservable.from_angles(2. * np.pi / 3., 0.).basis
    basis_j = DichotomicObservable.from_angles(2. * np.pi / 3., np.pi).basis
    return state, basis_i, basis_j


def test_negative_quasiprobability(negative_pair):
    state, basis_i, basis_j = negative_pair
    kirkwood, q = mh_quasiprob(state, basis_i, basis_j, 1, 1)
    assert np.isclose(q, -0.125)
    assert abs(kirkwood.imag) < 1e-12

    table = two_time_table(state, basis_i, basis_j)
    assert table.is_negative
    assert np.isclose(table.minimum, -0.125)
    assert np.isclose(table.total, 1.)


def test_weak_value(negative_pair):
    state, basis_i, basis_j = negative_pair
    weak = weak_value_projector(state, basis_i, basis_j, 1, 1)
    assert np.isclose(weak, -0.5)
    post = abs(np.vdot(state.psi, basis_j[1])) ** 2
    assert np.isclose(post, 0.25)
    assert np.isclose(weak.real * post, -0.125)


def test_weak_value_undefined(negative_pair):
    state, basis_i, _ = negative_pair
    sigma_z = DichotomicObservable.from_angles(0.).basis
    with pytest.raises(WeakValueUndefinedError):
        weak_value_projector(state, basis_i, sigma_z, 1, -1)
    with pytest.raises(InvalidStateError):
        weak_value_projector(QuantumState.maximally_mixed(), basis_i, sigma_z, 1, 1)


def test_moment_form(lg_scenario):
    for (i, j), (m_i, m_j) in itertools.product(PAIRS, itertools.product(OUTCOMES, repeat=2)):
        q = scenario_two_time_table(lg_scenario, i, j)[(m_i, m_j)]
        assert np.isclose(quasiprob_moment_form(lg_scenario, i, j, m_i, m_j), q)


def test_two_time_nsit(lg_scenario):
    for pair in PAIRS:
        report = nsit_check_two_time(lg_scenario, *pair)
        assert report.later < 1e-12
        assert report.earlier < 1e-12


def test_sequential_measurement_signals():
    """Measuring σ_z on ``|+⟩`` first halves the probability of the later x outcome."""
    scenario = LGScenario.precession(
        QuantumState.from_vector(PLUS), axis=(0., -1., 0.), times=(0., np.pi / 2., np.pi),
    )
    report = nsit_check_two_time(scenario, 1, 2)
    assert report.later < 1e-12
    assert np.isclose(report.sequential_gap, 0.5)


def test_triple_table(lg_scenario):
    table = scenario_triple_table(lg_scenario)
    assert len(table) == 8
    assert np.isclose(table.total, 1.)
    assert np.isclose(sum(table.kirkwood.values()), 1.)
    for pair in [(1, 3), (2, 3)]:
        assert np.isclose(
            triple_correlations(table, *pair),
            anticommutator_correlation(lg_scenario, *pair),
        )


def test_triple_marginals(lg_scenario):
    report = triple_marginals(lg_scenario.initial, lg_scenario.bases)
    assert report.holds
    assert set(report.mh) == {"12", "13", "23"}
    assert report.as_dict()["holds"]


def test_maximally_mixed_triple_minimum():
    """Equally spaced by π/3, the maximally mixed state has negative values."""
    scenario = LGScenario.precession(
        QuantumState.maximally_mixed(), times=(0., np.pi / 3., 2. * np.pi / 3.),
    )
    table = scenario_triple_table(scenario)
    assert table.is_negative
    assert np.isclose(table.total, 1.)


def test_pure_form_is_measured(lg_scenario):
    """The pure-state form is compared with the doubly Kirkwood values, never
    asserted to coincide with them."""
    state = lg_scenario.initial
    report = triple_form_discrepancy(state, lg_scenario.bases)
    assert report.max_residual >= 0.
    assert report.agrees == (report.max_residual <= 1e-12)

    usable = [m for m in OUTCOMES if m not in report.skipped]
    pure_form = triple_quasiprob_pure_form(state, lg_scenario.bases, usable)
    assert len(pure_form) == 4 * len(usable)


def test_pure_form_skips_vanishing_overlap():
    """With |0⟩ and σ_z measured at all times, ``⟨ψ|m₃ = -1⟩`` vanishes."""
    scenario = LGScenario.precession(QuantumState.from_vector([1., 0.]), omega=0.)
    report = triple_form_discrepancy(scenario.initial, scenario.bases)
    assert report.skipped == (-1,)
    with pytest.raises(WeakValueUndefinedError):
        triple_quasiprob_pure_form(scenario.initial, scenario.bases)


def test_records(lg_scenario):
    rows = scenario_triple_table(lg_scenario).records()
    assert len(rows) == 8
    assert set(rows[0]) == {"m1", "m2", "m3", "q", "k_real", "k_imag", "negative"}


def test_invalid_table():
    with pytest.raises(OutcomeIndexError):
        QuasiprobTable(order=4, kirkwood={})
    with pytest.raises(OutcomeIndexError):
        QuasiprobTable(order=2, kirkwood={(1, 0): 1.})


@pytest.mark.parametrize("m_i, m_j", itertools.product(OUTCOMES, repeat=2))
def test_identical_bases_are_diagonal(quantum_state, dichotomic_observable, m_i, m_j):
    basis = dichotomic_observable.basis
    kirkwood, q = mh_quasiprob(quantum_state, basis, basis, m_i, m_j)
    born = quantum_state.born(basis.projector(m_i))
    assert np.isclose(q, born if m_i == m_j else 0.)
    assert abs(kirkwood.imag) < 1e-12


def test_identical_bases_collapse_triple_table(quantum_state, dichotomic_observable):
    basis = dichotomic_observable.basis
    table = triple_quasiprob(quantum_state, (basis, basis, basis))
    for m1, m2, m3 in itertools.product(OUTCOMES, repeat=3):
        if m1 == m2 == m3:
            assert np.isclose(table[(m1, m2, m3)], quantum_state.born(basis.projector(m1)))
        else:
            assert np.isclose(table[(m1, m2, m3)], 0.)


@pytest.mark.parametrize("seed", range(5))
def test_weak_value_sign_follows_quasiprobability(seed):
    """``q = Re[w] |⟨ψ|m_j⟩|²``, so both are negative together."""
    rng = np.random.default_rng(seed)
    negatives = 0
    for _ in range(40):
        theta, angle_i, angle_j = rng.uniform(0., np.pi, size=3)
        phi, phi_i, phi_j = rng.uniform(0., 2. * np.pi, size=3)
        state = QuantumState.from_bloch(theta, phi)
        basis_i = DichotomicObservable.from_angles(angle_i, phi_i).basis
        basis_j = DichotomicObservable.from_angles(angle_j, phi_j).basis
        for m_i, m_j in itertools.product(OUTCOMES, repeat=2):
            _, q = mh_quasiprob(state, basis_i, basis_j, m_i, m_j)
            post = abs(np.vdot(basis_j[m_j], state.psi)) ** 2
            if post < 1e-6:
                continue
            weak = weak_value_projector(state, basis_i, basis_j, m_i, m_j)
            assert np.isclose(q, weak.real * post, atol=1e-12)
            if abs(q) > 1e-9:
                assert (q < 0.) == (weak.real < 0.)
                negatives += q < 0.
    assert negatives > 0
