"""
Dense complex matrices (`CMatrix`) and vectors (`CVector`) are plain ``numpy`` arrays
of ``complex128``. The functions in this module check shapes and finiteness, so that
malformed operators fail loudly at the boundary instead of producing ``NaN`` deep
inside a pipeline.

The time evolution `unitary_evolution` uses the closed Pauli form for qubits and
``scipy.linalg.expm`` (scaling and squaring) for any other dimension.
"""
import logging
from typing import Sequence

import numpy as np
import numpy.typing as npt
from scipy import linalg as sp_linalg
from scipy.spatial.transform import Rotation

from .tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

CMatrix = npt.NDArray[np.complex128]
"""Square complex matrix of shape ``(dim, dim)``, ``dim >= 1``."""
CVector = npt.NDArray[np.complex128]
"""Complex vector of shape ``(dim,)``."""

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _pauli in PAULIS:
    _pauli.setflags(write=False)


class DimensionMismatchError(ValueError):
    """Raised when operands do not have compatible shapes."""


class NotHermitianError(ValueError):
    """Raised when an operator that must be Hermitian is not."""


class NonFiniteError(ValueError):
    """Raised when an array contains ``NaN`` or ``Inf`` entries."""


def as_matrix(a: npt.ArrayLike) -> CMatrix:
    """Return ``a`` as a square ``complex128`` matrix, or raise."""
    matrix = np.asarray(a, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteError("Matrix has non-finite entries.")
    return matrix


def as_vector(v: npt.ArrayLike) -> CVector:
    """Return ``v`` as a one-dimensional ``complex128`` vector, or raise."""
    vector = np.asarray(v, dtype=np.complex128)
    if vector.ndim != 1 or vector.shape[0] < 1:
        raise DimensionMismatchError(f"Expected a vector, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise NonFiniteError("Vector has non-finite entries.")
    return vector


def identity(dim: int) -> CMatrix:
    """Identity matrix of dimension ``dim``."""
    return np.eye(dim, dtype=np.complex128)


def matmul(a: CMatrix, b: CMatrix) -> CMatrix:
    """Complex matrix product ``a @ b`` of two matrices of equal dimension."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"Cannot multiply matrices of dimension {a.shape[0]} and {b.shape[0]}"
        )
    return a @ b


def adjoint(a: CMatrix) -> CMatrix:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def kron(a: CMatrix, b: CMatrix) -> CMatrix:
    """Kronecker product, the left factor being the most significant index."""
    return np.kron(as_matrix(a), as_matrix(b))


def trace(a: CMatrix) -> complex:
    """Matrix trace."""
    return complex(np.trace(as_matrix(a)))


def commutator(a: CMatrix, b: CMatrix) -> CMatrix:
    """``[a, b] = ab - ba``."""
    return matmul(a, b) - matmul(b, a)


def anticommutator(a: CMatrix, b: CMatrix) -> CMatrix:
    """``{a, b} = ab + ba``."""
    return matmul(a, b) + matmul(b, a)


def expectation(operator: CMatrix, rho: CMatrix) -> complex:
    """``Tr[operator rho]``."""
    return trace(matmul(operator, rho))


def max_abs_diff(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """Largest entrywise absolute difference, used as residual everywhere."""
    a, b = np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Shapes {a.shape} and {b.shape} differ")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def is_hermitian(a: CMatrix, tol: float = DEFAULT_TOLERANCES.identity) -> bool:
    """Whether ``a`` equals its adjoint up to ``tol``."""
    return max_abs_diff(a, adjoint(a)) <= tol


def norm(v: CVector) -> float:
    """Euclidean norm of a vector."""
    return float(np.linalg.norm(as_vector(v)))


def is_normalized(v: CVector, tol: float = DEFAULT_TOLERANCES.identity) -> bool:
    """Whether ``| ||v|| - 1 | <= tol``."""
    return abs(norm(v) - 1.0) <= tol


def bloch_operator(n: Sequence[float]) -> CMatrix:
    """The qubit operator ``n·σ`` for a real 3-vector ``n``."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise DimensionMismatchError(f"Bloch vector must have 3 components, got {n.shape}")
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def bloch_components(a: CMatrix) -> np.ndarray:
    """Real coefficients ``h`` of the traceless part ``h·σ`` of a qubit operator."""
    a = as_matrix(a)
    if a.shape != (2, 2):
        raise DimensionMismatchError("Bloch components only exist for 2x2 operators")
    return np.array([np.real(np.trace(a @ pauli)) / 2. for pauli in PAULIS])


def rotation_about(axis: Sequence[float], angle: float) -> np.ndarray:
    """Real 3x3 matrix that rotates Bloch vectors by ``angle`` about ``axis``."""
    axis = np.asarray(axis, dtype=float)
    axis_norm = np.linalg.norm(axis)
    if axis_norm == 0.:
        return np.eye(3)
    return Rotation.from_rotvec(angle * axis / axis_norm).as_matrix()


def unitary_evolution(
    hamiltonian: CMatrix,
    t: float,
    tol: float = DEFAULT_TOLERANCES.identity,
) -> CMatrix:
    """Return ``U = exp(-i H t)`` (with ħ = 1) for a Hermitian ``hamiltonian``.

    For qubits, ``H = h0 I + |h| ĥ·σ`` and the closed form
    ``exp(-i h0 t) (cos(|h| t) I - i sin(|h| t) ĥ·σ)`` is used. Any other dimension
    goes through ``scipy.linalg.expm``.
    """
    hamiltonian = as_matrix(hamiltonian)
    if not is_hermitian(hamiltonian, tol):
        raise NotHermitianError("The Hamiltonian must be Hermitian.")

    if hamiltonian.shape == (2, 2):
        h0 = np.real(np.trace(hamiltonian)) / 2.
        h = bloch_components(hamiltonian)
        h_norm = np.linalg.norm(h)
        global_phase = np.exp(-1j * h0 * t)
        if h_norm == 0.:
            return global_phase * identity(2)
        return global_phase * (
            np.cos(h_norm * t) * identity(2)
            - 1j * np.sin(h_norm * t) * bloch_operator(h / h_norm)
        )

    return sp_linalg.expm(-1j * t * hamiltonian)
