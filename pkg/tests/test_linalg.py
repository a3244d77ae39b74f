import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lgswitch.linalg.core import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DimensionMismatchError,
    NonFiniteError,
    NotHermitianError,
    adjoint,
    anticommutator,
    as_matrix,
    bloch_components,
    bloch_operator,
    commutator,
    identity,
    is_hermitian,
    is_normalized,
    kron,
    matmul,
    max_abs_diff,
    rotation_about,
    trace,
    unitary_evolution,
)
from lgswitch.linalg.tolerances import DEFAULT_TOLERANCES, Tolerances

TOL = 1e-12

finite_floats = st.floats(min_value=-5., max_value=5., allow_nan=False)
bloch_vectors = arrays(np.float64, (3,), elements=finite_floats)
nonzero_components = st.one_of(
    st.floats(min_value=-5., max_value=-0.1), st.floats(min_value=0.1, max_value=5.)
)
rotation_axes = arrays(np.float64, (3,), elements=nonzero_components)
times = st.floats(min_value=-10., max_value=10., allow_nan=False)


def random_hermitian(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.


def test_pauli_algebra():
    """The Pauli matrices square to one and anticommute pairwise."""
    for pauli in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        assert max_abs_diff(pauli @ pauli, identity(2)) < TOL
    assert max_abs_diff(anticommutator(SIGMA_X, SIGMA_Y), np.zeros((2, 2))) < TOL
    assert max_abs_diff(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z) < TOL


def test_shape_checks():
    with pytest.raises(DimensionMismatchError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(DimensionMismatchError):
        matmul(identity(2), identity(3))
    with pytest.raises(NonFiniteError):
        as_matrix([[np.nan, 0.], [0., 1.]])
    with pytest.raises(DimensionMismatchError):
        bloch_operator([1., 0.])


def test_kron_ordering():
    """The left factor is the most significant index."""
    product = kron(SIGMA_X, identity(2))
    assert product[0, 2] == 1.
    assert product[0, 1] == 0.


@settings(max_examples=50)
@given(n=bloch_vectors)
def test_bloch_roundtrip(n):
    assert np.allclose(bloch_components(bloch_operator(n)), n, atol=1e-12)


@settings(max_examples=50)
@given(n=rotation_axes, t=times)
def test_qubit_evolution_is_unitary(n, t):
    unitary = unitary_evolution(bloch_operator(n) / 2., t)
    assert max_abs_diff(adjoint(unitary) @ unitary, identity(2)) < 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_closed_form_matches_expm(seed):
    """The qubit closed form agrees with scipy's matrix exponential."""
    from scipy.linalg import expm

    hamiltonian = random_hermitian(2, seed)
    assert max_abs_diff(unitary_evolution(hamiltonian, 0.7), expm(-0.7j * hamiltonian)) < 1e-12


def test_evolution_in_higher_dimension():
    hamiltonian = random_hermitian(4, seed=3)
    unitary = unitary_evolution(hamiltonian, 1.3)
    assert max_abs_diff(adjoint(unitary) @ unitary, identity(4)) < 1e-12
    assert abs(trace(unitary @ adjoint(unitary)) - 4.) < 1e-12


def test_evolution_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        unitary_evolution(np.array([[0., 1.], [0., 0.]]), 1.)


def test_rotation_matches_heisenberg_picture():
    """Precession about y by ωt turns the Bloch vector of σ_z by -ωt."""
    unitary = unitary_evolution(SIGMA_Y / 2., np.pi / 2.)
    evolved = adjoint(unitary) @ SIGMA_Z @ unitary
    expected = rotation_about([0., 1., 0.], -np.pi / 2.) @ [0., 0., 1.]
    assert np.allclose(bloch_components(evolved), expected, atol=1e-12)
    assert np.allclose(expected, [-1., 0., 0.], atol=1e-12)


def test_hermitian_and_normalized():
    assert is_hermitian(SIGMA_Y)
    assert not is_hermitian(np.array([[0., 1.], [0., 0.]]))
    assert is_normalized(np.array([1., 1j]) / np.sqrt(2.))
    assert not is_normalized(np.array([1., 1.]))


def test_tolerances_from_mapping():
    tol = Tolerances.from_mapping({"pipeline": "1e-8", "unknown": 3})
    assert tol.pipeline == 1e-8
    assert tol.identity == DEFAULT_TOLERANCES.identity
    assert Tolerances.from_mapping(None) == DEFAULT_TOLERANCES


def loop_matmul(a, b):
    dim = len(a)
    return np.array([
        [sum(a[row][k] * b[k][col] for k in range(dim)) for col in range(dim)]
        for row in range(dim)
    ])


def taylor_evolution(hamiltonian, t, terms=40):
    """Partial sum of the exponential series of ``-i H t``."""
    generator = -1j * t * np.asarray(hamiltonian)
    term = np.eye(len(generator), dtype=complex)
    total = term.copy()
    for k in range(1, terms):
        term = loop_matmul(term, generator) / k
        total = total + term
    return total


def test_pauli_product_against_loops():
    expected = loop_matmul(SIGMA_Z, SIGMA_X)
    assert max_abs_diff(expected, 1j * SIGMA_Y) < TOL
    assert max_abs_diff(matmul(SIGMA_Z, SIGMA_X), expected) < TOL


def test_adjoint():
    assert max_abs_diff(adjoint(1j * identity(2)), -1j * identity(2)) < TOL
    assert max_abs_diff(adjoint(SIGMA_Y), SIGMA_Y) < TOL
    a = random_hermitian(3, seed=5) + 1j * identity(3)
    assert max_abs_diff(adjoint(adjoint(a)), a) < TOL


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_kron_mixed_product(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
    left = matmul(kron(a, b), kron(c, d))
    assert max_abs_diff(left, kron(matmul(a, c), matmul(b, d))) < 1e-13


@settings(max_examples=50)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), dim=st.integers(1, 4))
def test_matmul_is_associative(seed, dim):
    rng = np.random.default_rng(seed)
    a, b, c = rng.normal(size=(3, dim, dim)) + 1j * rng.normal(size=(3, dim, dim))
    assert max_abs_diff(matmul(matmul(a, b), c), matmul(a, matmul(b, c))) < 1e-12


@settings(max_examples=50)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), dim=st.integers(1, 4))
def test_trace_is_cyclic(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(2, dim, dim)) + 1j * rng.normal(size=(2, dim, dim))
    assert abs(trace(matmul(a, b)) - trace(matmul(b, a))) < 1e-12


@pytest.mark.parametrize("angle, bloch_z", [(np.pi, -1.), (np.pi / 3., 0.5)])
def test_precession_against_series(angle, bloch_z):
    """``H = σ_y / 2`` turns σ_z away from the z-axis by ``t``."""
    hamiltonian = SIGMA_Y / 2.
    unitary = unitary_evolution(hamiltonian, angle)
    assert max_abs_diff(unitary, taylor_evolution(hamiltonian, angle)) < 1e-12

    evolved = adjoint(unitary) @ SIGMA_Z @ unitary
    components = bloch_components(evolved)
    assert np.isclose(components[2], bloch_z)
    assert np.isclose(np.linalg.norm(components), 1.)
    if angle == np.pi:
        assert max_abs_diff(evolved, -SIGMA_Z) < 1e-12
