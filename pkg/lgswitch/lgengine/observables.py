"""
Domain types of a Leggett-Garg scenario.

A `QuantumState` wraps a density operator (and the state vector, if it is pure), a
`DichotomicObservable` wraps a Hermitian operator with eigenvalues ±1, and a
`MeasurementBasis` holds the orthonormal eigenvectors of such an observable keyed by
outcome. The `LGScenario` ties these together with a Hamiltonian and three measurement
times and generates the Heisenberg-picture observables

    M_j = U†(t_j - t_1) M_1 U(t_j - t_1).

All arrays held by these types are made read-only on construction.
"""
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..linalg.core import (
    CMatrix,
    CVector,
    as_matrix,
    as_vector,
    bloch_components,
    bloch_operator,
    identity,
    is_hermitian,
    max_abs_diff,
    unitary_evolution,
)
from ..linalg.tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

OUTCOMES = (+1, -1)
"""Outcomes of a dichotomic measurement, in the order used for all tables."""

TIME_INDICES = (1, 2, 3)


class InvalidStateError(ValueError):
    """Raised when a density operator is not a valid quantum state."""


class InvalidObservableError(ValueError):
    """Raised when an operator is not a dichotomic (±1-valued) observable."""


class InvalidBasisError(ValueError):
    """Raised when basis vectors are not orthonormal."""


class UnsharpnessError(ValueError):
    """Raised when the unsharpness parameter lies outside (0, 1]."""


class OutcomeIndexError(ValueError):
    """Raised for measurement times outside {1, 2, 3}, bad pairs or bad outcomes."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


def fix_phase(vector: CVector, tol: float = DEFAULT_TOLERANCES.identity) -> CVector:
    """Multiply ``vector`` by the phase that makes its first nonzero component real
    and positive."""
    vector = as_vector(vector)
    for component in vector:
        if abs(component) > tol:
            return vector * (abs(component) / component)
    return vector


def check_outcome(m: int) -> int:
    """Return ``m`` if it is a valid dichotomic outcome."""
    if m not in OUTCOMES:
        raise OutcomeIndexError(f"Outcome must be +1 or -1, got {m}")
    return m


def check_time_pair(i: int, j: int) -> Tuple[int, int]:
    """Return ``(i, j)`` if both are measurement times and ``i < j``."""
    if i not in TIME_INDICES or j not in TIME_INDICES:
        raise OutcomeIndexError(f"Time indices must be in {TIME_INDICES}, got ({i}, {j})")
    if i >= j:
        raise OutcomeIndexError(f"Expected i < j, got ({i}, {j})")
    return i, j


@dataclass(frozen=True)
class QuantumState:
    """Density operator ``rho`` and, for rank-1 states, the vector ``psi``."""
    rho: CMatrix
    """Density operator: Hermitian, unit trace, positive semi-definite."""
    psi: Optional[CVector] = None
    """State vector with ``rho = |psi><psi|``, present only for pure states."""

    def __post_init__(self):
        rho = as_matrix(self.rho)
        tol = DEFAULT_TOLERANCES.identity

        if abs(np.trace(rho) - 1.) > tol:
            raise InvalidStateError(f"Trace of rho is {np.trace(rho)}, not 1")
        if not is_hermitian(rho, tol):
            raise InvalidStateError("Density operator is not Hermitian")
        if np.min(np.linalg.eigvalsh(rho)) < -tol:
            raise InvalidStateError("Density operator has negative eigenvalues")

        if self.psi is not None:
            psi = as_vector(self.psi)
            if max_abs_diff(np.outer(psi, psi.conj()), rho) > tol:
                raise InvalidStateError("State vector is inconsistent with rho")
            object.__setattr__(self, "psi", _frozen(psi))

        object.__setattr__(self, "rho", _frozen(rho))

    @classmethod
    def from_vector(cls, psi: Sequence[complex]) -> "QuantumState":
        """Pure state from a normalized state vector."""
        psi = as_vector(psi)
        if abs(np.linalg.norm(psi) - 1.) > DEFAULT_TOLERANCES.identity:
            raise InvalidStateError(f"State vector has norm {np.linalg.norm(psi)}")
        return cls(rho=np.outer(psi, psi.conj()), psi=psi)

    @classmethod
    def from_bloch(cls, theta: float, phi: float, purity: float = 1.) -> "QuantumState":
        """Qubit state with Bloch vector ``purity * (sinθ cosφ, sinθ sinφ, cosθ)``.

        A purity of 1 yields a pure state that also carries its state vector.
        """
        if not 0. <= purity <= 1.:
            raise InvalidStateError(f"Purity must lie in [0, 1], got {purity}")
        if purity == 1.:
            return cls.from_vector([
                np.cos(theta / 2.),
                np.exp(1j * phi) * np.sin(theta / 2.),
            ])
        direction = [
            np.sin(theta) * np.cos(phi),
            np.sin(theta) * np.sin(phi),
            np.cos(theta),
        ]
        rho = (identity(2) + purity * bloch_operator(direction)) / 2.
        return cls(rho=rho)

    @classmethod
    def maximally_mixed(cls, dim: int = 2) -> "QuantumState":
        """The state ``I / dim``."""
        return cls(rho=identity(dim) / dim)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.psi is not None

    @property
    def bloch(self) -> np.ndarray:
        """Bloch vector of a qubit state."""
        return 2. * bloch_components(self.rho)

    def born(self, projector: CMatrix) -> float:
        """Born probability ``Tr[projector rho]``."""
        return float(np.real(np.trace(projector @ self.rho)))


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal basis vectors keyed by measurement outcome."""
    vectors: Dict[int, CVector]

    def __post_init__(self):
        tol = DEFAULT_TOLERANCES.identity
        vectors = {m: _frozen(as_vector(v)) for m, v in self.vectors.items()}
        keys = list(vectors)
        for a in keys:
            for b in keys:
                overlap = np.vdot(vectors[a], vectors[b])
                expected = 1. if a == b else 0.
                if abs(overlap - expected) > tol:
                    raise InvalidBasisError(
                        f"Basis vectors {a} and {b} have overlap {overlap:.3g}"
                    )
        object.__setattr__(self, "vectors", vectors)

    def __getitem__(self, m: int) -> CVector:
        return self.vectors[check_outcome(m)]

    def projector(self, m: int) -> CMatrix:
        """``|m><m|``."""
        vector = self[m]
        return np.outer(vector, vector.conj())


@dataclass(frozen=True)
class DichotomicObservable:
    """Hermitian operator ``M`` with ``M² = I``, i.e. eigenvalues ±1."""
    matrix: CMatrix

    def __post_init__(self):
        matrix = as_matrix(self.matrix)
        tol = DEFAULT_TOLERANCES.identity
        if not is_hermitian(matrix, tol):
            raise InvalidObservableError("Observable is not Hermitian")
        if max_abs_diff(matrix @ matrix, identity(matrix.shape[0])) > tol:
            raise InvalidObservableError("Observable does not square to the identity")
        object.__setattr__(self, "matrix", _frozen(matrix))

    @classmethod
    def from_bloch(cls, bloch: Sequence[float]) -> "DichotomicObservable":
        """Qubit observable ``n·σ`` for a unit 3-vector ``n``."""
        bloch = np.asarray(bloch, dtype=float)
        if abs(np.linalg.norm(bloch) - 1.) > DEFAULT_TOLERANCES.identity:
            raise InvalidObservableError(f"Bloch vector {bloch} is not a unit vector")
        return cls(matrix=bloch_operator(bloch))

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.) -> "DichotomicObservable":
        """Qubit observable along polar angle ``theta`` and azimuth ``phi``."""
        return cls.from_bloch([
            np.sin(theta) * np.cos(phi),
            np.sin(theta) * np.sin(phi),
            np.cos(theta),
        ])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def bloch(self) -> np.ndarray:
        """Unit Bloch vector of a qubit observable."""
        return bloch_components(self.matrix)

    def projector(self, m: int) -> CMatrix:
        """Spectral projector ``(I + m M) / 2``."""
        return (identity(self.dim) + check_outcome(m) * self.matrix) / 2.

    @cached_property
    def basis(self) -> MeasurementBasis:
        """Eigenvectors keyed by eigenvalue, phase-fixed so that the first nonzero
        component is real and positive. Only defined for non-degenerate (qubit)
        observables."""
        if self.dim != 2:
            raise InvalidBasisError("Eigenbasis of a degenerate observable is not unique")
        eigenvalues, eigenvectors = np.linalg.eigh(self.matrix)
        return MeasurementBasis({
            int(round(value)): fix_phase(eigenvectors[:, k])
            for k, value in enumerate(eigenvalues)
        })

    def evolve(self, unitary: CMatrix) -> "DichotomicObservable":
        """Heisenberg-picture observable ``U† M U``."""
        unitary = as_matrix(unitary)
        return DichotomicObservable(unitary.conj().T @ self.matrix @ unitary)


@dataclass(frozen=True)
class LGScenario:
    """Initial state, Hamiltonian, three measurement times, the observable measured
    at t₁ and the unsharpness of the earlier measurement in a sequential pair."""
    initial: QuantumState
    hamiltonian: CMatrix
    times: Tuple[float, float, float]
    base: DichotomicObservable
    lam: float = 1.
    """Unsharpness λ ∈ (0, 1] of the first measurement in sequential statistics."""
    _observables: Dict[int, DichotomicObservable] = field(
        default=None, init=False, repr=False, compare=False,
    )

    def __post_init__(self):
        hamiltonian = as_matrix(self.hamiltonian)
        times = tuple(float(t) for t in self.times)

        if len(times) != 3 or not times[0] <= times[1] <= times[2]:
            raise OutcomeIndexError(f"Times must satisfy t1 <= t2 <= t3, got {times}")
        if not 0. < self.lam <= 1.:
            raise UnsharpnessError(f"Unsharpness must lie in (0, 1], got {self.lam}")
        if not hamiltonian.shape[0] == self.initial.dim == self.base.dim:
            raise InvalidStateError("State, Hamiltonian and observable dimensions differ")

        object.__setattr__(self, "hamiltonian", _frozen(hamiltonian))
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "_observables", {
            i: self.base.evolve(unitary_evolution(hamiltonian, t - times[0]))
            for i, t in zip((1, 2, 3), times)
        })

    @classmethod
    def precession(
        cls,
        initial: QuantumState,
        axis: Sequence[float] = (0., 1., 0.),
        omega: float = 1.,
        times: Tuple[float, float, float] = (0., 1., 2.),
        base: Optional[DichotomicObservable] = None,
        lam: float = 1.,
    ) -> "LGScenario":
        """Qubit precessing under ``H = (ω/2) n·σ``, so that the Bloch vector of the
        measured observable turns by the angle ``ω Δt`` between measurements."""
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        if base is None:
            base = DichotomicObservable.from_bloch([0., 0., 1.])
        return cls(
            initial=initial,
            hamiltonian=omega / 2. * bloch_operator(axis),
            times=times,
            base=base,
            lam=lam,
        )

    def with_lambda(self, lam: float) -> "LGScenario":
        """Copy of this scenario with another unsharpness."""
        return replace(self, lam=lam)

    def observable(self, i: int) -> DichotomicObservable:
        """The Heisenberg-picture observable measured at time ``t_i``."""
        if i not in TIME_INDICES:
            raise OutcomeIndexError(f"Time index must be in {TIME_INDICES}, got {i}")
        return self._observables[i]

    def basis(self, i: int) -> MeasurementBasis:
        """Eigenbasis of the observable measured at time ``t_i``."""
        return self.observable(i).basis

    @property
    def bases(self) -> Tuple[MeasurementBasis, MeasurementBasis, MeasurementBasis]:
        return tuple(self.basis(i) for i in TIME_INDICES)

    def heisenberg_chain_residual(self) -> float:
        """Residual between evolving M₁ to t₃ via t₂ and evolving it directly."""
        t1, t2, t3 = self.times
        via_t2 = self.observable(2).evolve(unitary_evolution(self.hamiltonian, t3 - t2))
        return max_abs_diff(via_t2.matrix, self.observable(3).matrix)
