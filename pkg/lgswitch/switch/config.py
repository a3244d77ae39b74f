"""
Configuration of a switch run: the system input, the two Kraus families and the
beam-splitter convention.

Two conventions are available. ``"phased"`` (the default) uses a beam splitter
whose combination with the π phase shift on ``ψ_H`` maps

    ψ_H → (ψ₃ - iψ₄)/√2,    ψ_V → (ψ₃ + iψ₄)/√2,

which reproduces the closed-form final state with the anticommutator in the
``(ψ₃, +)`` slot. ``"symmetric"`` uses ``ψ_H → (ψ₃ + iψ₄)/√2``,
``ψ_V → (iψ₃ + ψ₄)/√2`` with the same phase shift; it is kept selectable so that the
mismatch can be inspected.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from ..lgengine.observables import OUTCOMES, DichotomicObservable
from ..lgengine.sequential import sqrt_effect
from ..linalg.core import CMatrix, CVector, as_matrix, as_vector, identity, max_abs_diff
from ..linalg.tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

PLUS = np.array([1., 1.], dtype=np.complex128) / np.sqrt(2.)
"""``|+⟩ = (|H⟩ + |V⟩)/√2``, the default system input."""

POLARIZATION_REBASING = np.array([[1., 1.], [1., -1.]], dtype=np.complex128) / np.sqrt(2.)
"""Maps ``(H, V)`` coordinates to ``(+, -)`` coordinates."""


class KrausCompletenessError(ValueError):
    """Raised when a Kraus family does not satisfy ``Σ N†N = I``."""


class UnnormalizedInputError(ValueError):
    """Raised when the system input is not a normalized qubit vector."""


@dataclass(frozen=True)
class SwitchConvention:
    """Beam splitter (columns ``ψ_H``, ``ψ_V``; rows ``ψ₃``, ``ψ₄``) and the phases
    applied to the two arms before it."""
    name: str
    beam_splitter: CMatrix
    arm_phases: Sequence[complex] = (-1., 1.)

    def __post_init__(self):
        splitter = as_matrix(self.beam_splitter)
        if splitter.shape != (2, 2):
            raise ValueError("The beam splitter acts on the two paths only")
        if max_abs_diff(splitter.conj().T @ splitter, identity(2)) > DEFAULT_TOLERANCES.identity:
            raise ValueError(f"Beam splitter of convention {self.name!r} is not unitary")
        object.__setattr__(self, "beam_splitter", splitter)

    @property
    def path_operator(self) -> CMatrix:
        """Beam splitter after the phase shift."""
        return self.beam_splitter @ np.diag(np.asarray(self.arm_phases, dtype=np.complex128))


CONVENTIONS: Dict[str, SwitchConvention] = {
    # default: the only convention whose (ψ₃, +) amplitude matches the closed form
    # checked by `simulate.closed_form_residuals`. "symmetric" keeps the printed
    # beam-splitter rows and fails that check.
    "phased": SwitchConvention(
        name="phased",
        beam_splitter=np.array([[-1., 1.], [1j, 1j]]) / np.sqrt(2.),
    ),
    "symmetric": SwitchConvention(
        name="symmetric",
        beam_splitter=np.array([[1., 1j], [1j, 1.]]) / np.sqrt(2.),
    ),
}


def get_convention(name: str) -> SwitchConvention:
    """Look up a named convention."""
    try:
        return CONVENTIONS[name]
    except KeyError as key_err:
        raise ValueError(
            f"Unknown convention {name!r}, choose from {sorted(CONVENTIONS)}"
        ) from key_err


def kraus_from_povm(obs: DichotomicObservable, lam: float = 1.) -> Dict[int, CMatrix]:
    """Kraus operators ``√E^±`` of the unsharp measurement of ``obs``.

    For ``lam = 1`` these are the spectral projectors.
    """
    return {m: sqrt_effect(obs, lam, m) for m in OUTCOMES}


def completeness_residual(kraus: Dict[int, CMatrix]) -> float:
    """``max |Σ N†N - I|`` of a Kraus family."""
    total = sum(op.conj().T @ op for op in kraus.values())
    return max_abs_diff(total, identity(total.shape[0]))


@dataclass(frozen=True)
class SwitchConfig:
    """Everything needed to run the interferometer for any pair of outcomes."""
    system_input: CVector
    kraus_i: Dict[int, CMatrix]
    kraus_j: Dict[int, CMatrix]
    convention: SwitchConvention = field(default_factory=lambda: CONVENTIONS["phased"])

    def __post_init__(self):
        system_input = as_vector(self.system_input)
        if system_input.shape != (2,):
            raise UnnormalizedInputError("The system input must be a qubit vector")
        if abs(np.linalg.norm(system_input) - 1.) > DEFAULT_TOLERANCES.identity:
            raise UnnormalizedInputError(
                f"System input has norm {np.linalg.norm(system_input)}, not 1"
            )
        object.__setattr__(self, "system_input", system_input)
        for name in ("kraus_i", "kraus_j"):
            kraus = {m: as_matrix(getattr(self, name)[m]) for m in OUTCOMES}
            object.__setattr__(self, name, kraus)

    @classmethod
    def from_observables(
        cls,
        obs_i: DichotomicObservable,
        obs_j: DichotomicObservable,
        system_input: Optional[Sequence[complex]] = None,
        lam: float = 1.,
        convention: str = "phased",
    ) -> "SwitchConfig":
        """Configuration measuring ``obs_i`` and ``obs_j``, both with unsharpness
        ``lam``."""
        return cls(
            system_input=PLUS if system_input is None else system_input,
            kraus_i=kraus_from_povm(obs_i, lam),
            kraus_j=kraus_from_povm(obs_j, lam),
            convention=get_convention(convention),
        )

    def projector_residual(self) -> float:
        """Largest of ``|N† - N|`` and ``|N² - N|`` over both Kraus families."""
        return max(
            max(max_abs_diff(op.conj().T, op), max_abs_diff(op @ op, op))
            for name in ("kraus_i", "kraus_j")
            for op in getattr(self, name).values()
        )

    def is_projective(self, tol: float = DEFAULT_TOLERANCES.identity) -> bool:
        """Whether every Kraus operator is an orthogonal projector, which the
        quasiprobability readout requires."""
        return self.projector_residual() <= tol

    def check_completeness(self, tol: float = DEFAULT_TOLERANCES.identity):
        """Raise a `KrausCompletenessError` if either family is incomplete."""
        for name in ("kraus_i", "kraus_j"):
            residual = completeness_residual(getattr(self, name))
            if residual > tol:
                raise KrausCompletenessError(
                    f"Kraus family {name} violates completeness by {residual:.3e}"
                )
