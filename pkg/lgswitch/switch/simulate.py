"""
End-to-end simulation of the switch interferometer.

A run goes through three stages: `prepare_input` routes the polarization input
through the polarizing beam splitter, `apply_switch` lets the system pick up
``N_i N_j`` on the ``ψ_H`` arm and ``N_j N_i`` on the ``ψ_V`` arm, and
`apply_ps_and_bs` applies the phase shift, the recombining beam splitter and the
polarization rebasing. `run_switch` chains them into a `SwitchRun`.

Vectors on ``system ⊗ path ⊗ polarization`` are indexed ``4 s + 2 p + c`` with
``p = 0`` for ``ψ_H``/``ψ₃`` and ``c = 0`` for ``H``/``+``.
"""
import itertools
import logging
import time
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..lgengine.observables import OUTCOMES, check_outcome
from ..linalg.core import CVector, anticommutator, as_vector, commutator, identity, kron
from ..linalg.tolerances import DEFAULT_TOLERANCES, Tolerances
from .config import PLUS, POLARIZATION_REBASING, SwitchConfig

logger = logging.getLogger(__name__)

PATHS = ("psi3", "psi4")
POLARIZATIONS = ("+", "-")
Slot = Tuple[str, str]
SLOTS = tuple(itertools.product(PATHS, POLARIZATIONS))


class ReadoutError(ValueError):
    """Raised when the post-selected quasiprobability cannot be read from a run."""


def _basis_vector(index: int) -> CVector:
    vector = np.zeros(2, dtype=np.complex128)
    vector[index] = 1.
    return vector


def prepare_input(config: SwitchConfig) -> CVector:
    """Path ⊗ polarization state ``α|ψ_H H⟩ + β|ψ_V V⟩`` behind the polarizing beam
    splitter, for the input ``α|H⟩ + β|V⟩``."""
    alpha, beta = config.system_input
    state = np.zeros(4, dtype=np.complex128)
    state[0] = alpha
    state[3] = beta
    return state


def apply_switch(state: CVector, config: SwitchConfig, m_i: int, m_j: int) -> CVector:
    """Attach the system register in ``|s⟩`` and apply the measurements in the order
    fixed by the path. The result is the unnormalized branch of ``(m_i, m_j)``."""
    state = as_vector(state).reshape(2, 2)
    n_i = config.kraus_i[check_outcome(m_i)]
    n_j = config.kraus_j[check_outcome(m_j)]
    reference = config.system_input

    arms = (n_i @ n_j @ reference, n_j @ n_i @ reference)
    return sum(
        np.kron(arm, np.kron(_basis_vector(path), state[path]))
        for path, arm in enumerate(arms)
    )


def apply_ps_and_bs(state: CVector, config: SwitchConfig) -> CVector:
    """Phase shift, recombining beam splitter and polarization rebasing, applied to
    the path and polarization registers of ``state``."""
    state = as_vector(state)
    tensor = state.reshape(-1, 2, 2)
    path_op = config.convention.path_operator
    transformed = np.einsum(
        "pq,cd,sqd->spc", path_op, POLARIZATION_REBASING, tensor,
    )
    return transformed.reshape(state.shape)


@dataclass(frozen=True)
class SwitchRun:
    """Final state of one outcome branch and what the detectors see of it."""
    m_i: int
    m_j: int
    final_state: CVector
    reference: CVector

    def slot_vector(self, slot: Slot) -> CVector:
        """System-register vector at the detector ``slot``."""
        path, pol = PATHS.index(slot[0]), POLARIZATIONS.index(slot[1])
        return self.final_state.reshape(-1, 2, 2)[:, path, pol]

    @property
    def branch_amplitudes(self) -> Dict[Slot, complex]:
        """Amplitudes after post-selecting the system on ``|s⟩``."""
        return {
            slot: complex(np.vdot(self.reference, self.slot_vector(slot)))
            for slot in SLOTS
        }

    @property
    def branch_probabilities(self) -> Dict[Slot, float]:
        """Post-selected probabilities, the squared amplitudes."""
        return {slot: abs(amp) ** 2 for slot, amp in self.branch_amplitudes.items()}

    @property
    def full_probabilities(self) -> Dict[Slot, float]:
        """Probabilities of the detector slots without post-selecting the system."""
        return {
            slot: float(np.vdot(self.slot_vector(slot), self.slot_vector(slot)).real)
            for slot in SLOTS
        }

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.final_state))


def run_switch(config: SwitchConfig, m_i: int, m_j: int) -> SwitchRun:
    """Simulate the branch ``(m_i, m_j)`` from input to detectors."""
    branch = apply_switch(prepare_input(config), config, m_i, m_j)
    return SwitchRun(
        m_i=m_i,
        m_j=m_j,
        final_state=apply_ps_and_bs(branch, config),
        reference=config.system_input,
    )


def postselect_quasiprob(
    run: SwitchRun,
    config: SwitchConfig,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Read the two-time quasiprobability from the signed amplitude at ``(ψ₃, +)``:
    ``q = √2 · amplitude``.

    The readout only holds for projective measurements and the input ``|+⟩``. A
    photodetector sees ``|amplitude|²`` and therefore not the sign; the simulator
    reads the amplitude itself.
    """
    if not config.is_projective(tol.identity):
        raise ReadoutError(
            "The quasiprobability readout needs projective measurements, the Kraus "
            f"operators deviate from projectors by {config.projector_residual():.3e}"
        )
    if abs(abs(np.vdot(PLUS, config.system_input)) - 1.) > tol.identity:
        raise ReadoutError("The quasiprobability readout needs the input |+⟩")

    amplitude = run.branch_amplitudes[("psi3", "+")]
    if abs(amplitude.imag) > tol.pipeline:
        raise ReadoutError(
            f"Amplitude at (psi3, +) has imaginary part {amplitude.imag:.3e}"
        )
    return float(np.sqrt(2.) * amplitude.real)


@dataclass(frozen=True)
class DetectorStatistics:
    """Probabilities keyed by ``(m_i, m_j, path, polarization)``."""
    full: Dict[Tuple[int, int, str, str], float]
    """Without post-selection of the system; these sum to one."""
    postselected: Dict[Tuple[int, int, str, str], float]
    """After post-selecting the system on the reference state."""

    @property
    def total(self) -> float:
        return float(sum(self.full.values()))

    def records(self) -> list:
        return [
            {
                "m_i": key[0],
                "m_j": key[1],
                "path": key[2],
                "pol": key[3],
                "probability": value,
                "postselected": self.postselected[key],
            }
            for key, value in self.full.items()
        ]


def detector_statistics(
    config: SwitchConfig,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DetectorStatistics:
    """Detector probabilities of all outcome branches."""
    config.check_completeness(tol.identity)
    full, postselected = {}, {}
    for m_i, m_j in itertools.product(OUTCOMES, repeat=2):
        run = run_switch(config, m_i, m_j)
        amplitudes = run.branch_probabilities
        for slot, probability in run.full_probabilities.items():
            full[(m_i, m_j, *slot)] = probability
            postselected[(m_i, m_j, *slot)] = amplitudes[slot]
    return DetectorStatistics(full=full, postselected=postselected)


@dataclass(frozen=True)
class SlotResiduals:
    """Slot-by-slot distance between a run and the closed-form final state."""
    slots: Dict[Slot, float]

    @property
    def max_residual(self) -> float:
        return max(self.slots.values())


def closed_form_slots(config: SwitchConfig, m_i: int, m_j: int) -> Dict[Slot, CVector]:
    """System vectors of the closed-form final state for the input ``|+⟩``

        (1/2√2) [({N_i,N_j}|s⟩|+⟩ + [N_i,N_j]|s⟩|-⟩)|ψ₃⟩
                 + i([N_j,N_i]|s⟩|+⟩ - {N_i,N_j}|s⟩|-⟩)|ψ₄⟩].
    """
    n_i, n_j = config.kraus_i[m_i], config.kraus_j[m_j]
    reference = config.system_input
    scale = 1. / (2. * np.sqrt(2.))
    return {
        ("psi3", "+"): scale * anticommutator(n_i, n_j) @ reference,
        ("psi3", "-"): scale * commutator(n_i, n_j) @ reference,
        ("psi4", "+"): 1j * scale * commutator(n_j, n_i) @ reference,
        ("psi4", "-"): -1j * scale * anticommutator(n_i, n_j) @ reference,
    }


def closed_form_residuals(
    run: SwitchRun,
    config: SwitchConfig,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SlotResiduals:
    """Compare ``run`` with `closed_form_slots`. A mismatch is logged, not raised."""
    expected = closed_form_slots(config, run.m_i, run.m_j)
    residuals = SlotResiduals({
        slot: float(np.max(np.abs(run.slot_vector(slot) - vector)))
        for slot, vector in expected.items()
    })
    if residuals.max_residual > tol.pipeline:
        logger.warning(
            f"Convention {config.convention.name!r} deviates from the closed-form "
            f"final state by {residuals.max_residual:.3e} for ({run.m_i}, {run.m_j})"
        )
    return residuals


def dense_switch_oracle(config: SwitchConfig, m_i: int, m_j: int) -> CVector:
    """Final state built from dense operators on ``system ⊗ path ⊗ polarization``.

    The controlled order operator ``N_i N_j ⊗ |ψ_H⟩⟨ψ_H| + N_j N_i ⊗ |ψ_V⟩⟨ψ_V|`` and
    the interferometer optics are assembled with Kronecker products and applied to
    ``|s⟩ ⊗`` `prepare_input`, independently of the reshaping in `run_switch`.
    """
    start_time = time.perf_counter()
    n_i, n_j = config.kraus_i[m_i], config.kraus_j[m_j]
    horizontal = np.diag([1., 0.]).astype(np.complex128)
    vertical = np.diag([0., 1.]).astype(np.complex128)
    pol_identity = identity(2)

    order = (
        kron(kron(n_i @ n_j, horizontal), pol_identity)
        + kron(kron(n_j @ n_i, vertical), pol_identity)
    )
    optics = kron(kron(identity(2), config.convention.path_operator), POLARIZATION_REBASING)
    initial = np.kron(config.system_input, prepare_input(config))
    final = optics @ order @ initial

    logger.debug(f"Dense oracle took {time.perf_counter() - start_time:.4f} seconds")
    return final
