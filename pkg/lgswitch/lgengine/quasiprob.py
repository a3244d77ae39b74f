"""
Two-time and three-time quasiprobabilities.

The two-time distribution is built from the complex Kirkwood value

    k(m_i, m_j) = ⟨m_i|m_j⟩⟨m_j|ρ|m_i⟩ = Tr[π_i π_j ρ],

whose real part is the Margenau-Hill quasiprobability. The three-time (doubly
Kirkwood) distribution is

    k(m₁, m₂, m₃) = ⟨m₁|m₂⟩⟨m₂|ρ|m₃⟩⟨m₃|m₁⟩

without any prefactor, so that it sums to one and all of its pairwise marginals are
two-time quasiprobabilities. Both complex and real values are kept in a
`QuasiprobTable`.

The marginal reports (`nsit_check_two_time`, `triple_marginals`) compare these
distributions with Born probabilities and with sequential measurement statistics, the
latter of which generally fail the no-signalling-in-time condition.
"""
import itertools
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from ..linalg.core import CMatrix
from ..linalg.tolerances import DEFAULT_TOLERANCES, Tolerances
from .observables import (
    OUTCOMES,
    InvalidStateError,
    LGScenario,
    MeasurementBasis,
    OutcomeIndexError,
    QuantumState,
    check_outcome,
    check_time_pair,
)
from .sequential import anticommutator_correlation, sequential_joint_prob

logger = logging.getLogger(__name__)

Outcomes = Tuple[int, ...]
Bases = Tuple[MeasurementBasis, MeasurementBasis, MeasurementBasis]

PAIRS = ((1, 2), (1, 3), (2, 3))


class WeakValueUndefinedError(ZeroDivisionError):
    """Raised when the post-selection overlap of a weak value vanishes."""


@dataclass(frozen=True)
class QuasiprobTable:
    """Complex Kirkwood values of order 2 or 3, keyed by outcome tuples."""
    order: int
    kirkwood: Dict[Outcomes, complex]

    def __post_init__(self):
        if self.order not in (2, 3):
            raise OutcomeIndexError(f"Order must be 2 or 3, got {self.order}")
        for outcomes in self.kirkwood:
            if len(outcomes) != self.order:
                raise OutcomeIndexError(f"Outcome tuple {outcomes} has wrong length")
            for m in outcomes:
                check_outcome(m)

    def __getitem__(self, outcomes: Outcomes) -> float:
        """Real (Margenau-Hill) value at ``outcomes``."""
        return float(np.real(self.kirkwood[tuple(outcomes)]))

    def __iter__(self):
        return iter(self.kirkwood)

    def __len__(self) -> int:
        return len(self.kirkwood)

    @property
    def values(self) -> Dict[Outcomes, float]:
        return {outcomes: self[outcomes] for outcomes in self.kirkwood}

    @property
    def total(self) -> float:
        return float(sum(self.values.values()))

    @property
    def minimum(self) -> float:
        return min(self.values.values())

    @property
    def is_negative(self) -> bool:
        return self.minimum < 0.

    def marginal(self, keep: Sequence[int]) -> Dict[Outcomes, float]:
        """Sum the real values over all positions (1-based) not in ``keep``."""
        keep = tuple(keep)
        result = {}
        for outcomes, value in self.values.items():
            key = tuple(outcomes[p - 1] for p in keep)
            result[key] = result.get(key, 0.) + value
        return result

    def moment(self, positions: Sequence[int]) -> float:
        """``Σ Π_{p in positions} m_p q(m)``."""
        return float(sum(
            np.prod([outcomes[p - 1] for p in positions]) * value
            for outcomes, value in self.values.items()
        ))

    def records(self) -> list:
        """One row per outcome tuple, as used for the tabular output."""
        return [
            {
                **{f"m{p + 1}": m for p, m in enumerate(outcomes)},
                "q": float(np.real(value)),
                "k_real": float(np.real(value)),
                "k_imag": float(np.imag(value)),
                "negative": bool(np.real(value) < 0.),
            }
            for outcomes, value in self.kirkwood.items()
        ]


def _bra_ket(bra: np.ndarray, ket: np.ndarray) -> complex:
    return complex(np.vdot(bra, ket))


def _sandwich(bra: np.ndarray, rho: CMatrix, ket: np.ndarray) -> complex:
    return complex(bra.conj() @ rho @ ket)


def mh_quasiprob(
    state: QuantumState,
    basis_i: MeasurementBasis,
    basis_j: MeasurementBasis,
    m_i: int,
    m_j: int,
) -> Tuple[complex, float]:
    """Return the Kirkwood value ``⟨m_i|m_j⟩⟨m_j|ρ|m_i⟩`` and its real part.

    The bases are validated for orthonormality when they are constructed.
    """
    vec_i, vec_j = basis_i[m_i], basis_j[m_j]
    kirkwood = _bra_ket(vec_i, vec_j) * _sandwich(vec_j, state.rho, vec_i)
    return kirkwood, float(np.real(kirkwood))


def two_time_table(
    state: QuantumState,
    basis_i: MeasurementBasis,
    basis_j: MeasurementBasis,
) -> QuasiprobTable:
    """All four two-time quasiprobabilities."""
    return QuasiprobTable(order=2, kirkwood={
        (m_i, m_j): mh_quasiprob(state, basis_i, basis_j, m_i, m_j)[0]
        for m_i, m_j in itertools.product(OUTCOMES, repeat=2)
    })


def scenario_two_time_table(scenario: LGScenario, i: int, j: int) -> QuasiprobTable:
    """Two-time table for the measurement times ``i < j`` of ``scenario``."""
    check_time_pair(i, j)
    return two_time_table(scenario.initial, scenario.basis(i), scenario.basis(j))


def quasiprob_moment_form(
    scenario: LGScenario,
    i: int,
    j: int,
    m_i: int,
    m_j: int,
) -> float:
    """Two-time quasiprobability from its moment expansion

        ¼ (1 + m_i⟨M_i⟩ + m_j⟨M_j⟩ + m_i m_j ⟨M_i M_j⟩),

    with the sharp symmetrized correlation ``⟨M_i M_j⟩ = ½ Tr[ρ {M_i, M_j}]``.
    """
    check_time_pair(i, j)
    check_outcome(m_i)
    check_outcome(m_j)
    state = scenario.initial
    mean_i = state.born(scenario.observable(i).matrix)
    mean_j = state.born(scenario.observable(j).matrix)
    correlation = anticommutator_correlation(scenario, i, j)
    return (1. + m_i * mean_i + m_j * mean_j + m_i * m_j * correlation) / 4.


def weak_value_projector(
    state: QuantumState,
    basis_i: MeasurementBasis,
    basis_j: MeasurementBasis,
    m_i: int,
    m_j: int,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> complex:
    """Weak value ``⟨m_j|m_i⟩⟨m_i|ψ⟩ / ⟨m_j|ψ⟩`` of the projector onto ``|m_i⟩``,
    pre-selected in ``|ψ⟩`` and post-selected in ``|m_j⟩``.

    It is linked to the quasiprobability by ``q = Re[w] |⟨ψ|m_j⟩|²``.
    """
    if not state.is_pure:
        raise InvalidStateError("Weak values need a pure pre-selected state")
    vec_i, vec_j = basis_i[m_i], basis_j[m_j]
    post_overlap = _bra_ket(vec_j, state.psi)
    if abs(post_overlap) <= tol.overlap:
        raise WeakValueUndefinedError(
            f"Post-selection overlap |⟨m_j|ψ⟩| = {abs(post_overlap):.3g} vanishes"
        )
    return _bra_ket(vec_j, vec_i) * _bra_ket(vec_i, state.psi) / post_overlap


def triple_quasiprob(state: QuantumState, bases: Bases) -> QuasiprobTable:
    """Doubly Kirkwood distribution ``⟨m₁|m₂⟩⟨m₂|ρ|m₃⟩⟨m₃|m₁⟩`` over all eight
    outcome triples."""
    basis_1, basis_2, basis_3 = bases
    kirkwood = {}
    for m1, m2, m3 in itertools.product(OUTCOMES, repeat=3):
        vec_1, vec_2, vec_3 = basis_1[m1], basis_2[m2], basis_3[m3]
        kirkwood[(m1, m2, m3)] = (
            _bra_ket(vec_1, vec_2)
            * _sandwich(vec_2, state.rho, vec_3)
            * _bra_ket(vec_3, vec_1)
        )
    return QuasiprobTable(order=3, kirkwood=kirkwood)


def scenario_triple_table(scenario: LGScenario) -> QuasiprobTable:
    """Three-time table with the Heisenberg-picture bases of ``scenario``."""
    return triple_quasiprob(scenario.initial, scenario.bases)


def triple_quasiprob_pure_form(
    state: QuantumState,
    bases: Bases,
    m3_outcomes: Iterable[int] = OUTCOMES,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> QuasiprobTable:
    """Three-time values from two-time Kirkwood values of a pure state,

        k(m₁, m₃) k*(m₂, m₃) / |⟨ψ|m₃⟩|²,

    restricted to the outcomes ``m3_outcomes`` of the last measurement. This equals
    ``Tr[π₁ π₃ π₂ ρ]``, which in general is not the doubly Kirkwood value.
    """
    if not state.is_pure:
        raise InvalidStateError("The pure-state form needs a pure state")
    basis_1, basis_2, basis_3 = bases
    kirkwood = {}
    for m3 in m3_outcomes:
        overlap = _bra_ket(state.psi, basis_3[m3])
        if abs(overlap) <= tol.overlap:
            raise WeakValueUndefinedError(
                f"Overlap |⟨ψ|m₃⟩| = {abs(overlap):.3g} vanishes for m₃ = {m3}"
            )
        for m1, m2 in itertools.product(OUTCOMES, repeat=2):
            k13, _ = mh_quasiprob(state, basis_1, basis_3, m1, m3)
            k23, _ = mh_quasiprob(state, basis_2, basis_3, m2, m3)
            kirkwood[(m1, m2, m3)] = k13 * np.conj(k23) / abs(overlap) ** 2
    return QuasiprobTable(order=3, kirkwood=kirkwood)


@dataclass(frozen=True)
class FormDiscrepancy:
    """Difference between the pure-state form and the doubly Kirkwood values."""
    residuals: Dict[Outcomes, float]
    skipped: Tuple[int, ...]
    """Outcomes m₃ left out because ``⟨ψ|m₃⟩`` vanishes."""
    max_residual: float
    agrees: bool


def triple_form_discrepancy(
    state: QuantumState,
    bases: Bases,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> FormDiscrepancy:
    """Measure how far `triple_quasiprob_pure_form` deviates from
    `triple_quasiprob`. A deviation is logged, never raised."""
    basis_3 = bases[2]
    usable = tuple(
        m3 for m3 in OUTCOMES
        if abs(_bra_ket(state.psi, basis_3[m3])) > tol.overlap
    )
    skipped = tuple(m3 for m3 in OUTCOMES if m3 not in usable)

    reference = triple_quasiprob(state, bases)
    pure_form = triple_quasiprob_pure_form(state, bases, usable, tol)
    residuals = {
        outcomes: abs(pure_form[outcomes] - reference[outcomes])
        for outcomes in pure_form
    }
    max_residual = max(residuals.values(), default=0.)
    agrees = max_residual <= tol.identity
    if not agrees:
        logger.warning(
            f"Pure-state three-time form deviates from the doubly Kirkwood values "
            f"by up to {max_residual:.3e}"
        )
    return FormDiscrepancy(residuals, skipped, max_residual, agrees)


def triple_correlations(table: QuasiprobTable, j: int, k: int) -> float:
    """Pair correlation ``Σ m_j m_k q(m₁, m₂, m₃)`` of a three-time table."""
    if table.order != 3:
        raise OutcomeIndexError("Pair correlations need a three-time table")
    check_time_pair(j, k)
    return table.moment((j, k))


def _luders_pair_prob(
    state: QuantumState,
    basis_a: MeasurementBasis,
    basis_b: MeasurementBasis,
    m_a: int,
    m_b: int,
) -> float:
    projector_a = basis_a.projector(m_a)
    updated = projector_a @ state.rho @ projector_a
    return float(np.real(np.trace(basis_b.projector(m_b) @ updated)))


@dataclass(frozen=True)
class TripleMarginalReport:
    """Residuals of the marginals of a three-time table.

    Keys of the pair dictionaries name the two remaining times, e.g. ``"23"`` for
    the marginal summed over m₁.
    """
    born: Dict[int, float]
    """Single-time marginal vs. Born probability, per time."""
    mh: Dict[str, float]
    """Pairwise marginal vs. two-time Margenau-Hill values."""
    luders: Dict[str, float]
    """Pairwise marginal vs. Lüders sequential joint probabilities."""
    tol: float = field(default=DEFAULT_TOLERANCES.identity, repr=False)

    @property
    def holds(self) -> bool:
        """Whether the Born and Margenau-Hill identities hold."""
        return max([*self.born.values(), *self.mh.values()]) <= self.tol

    def as_dict(self) -> dict:
        return {
            "born": {str(key): value for key, value in self.born.items()},
            "mh": dict(self.mh),
            "luders": dict(self.luders),
            "holds": self.holds,
        }


def triple_marginals(
    state: QuantumState,
    bases: Bases,
    table: Optional[QuasiprobTable] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> TripleMarginalReport:
    """Compare every marginal of the three-time table with its candidate referents."""
    if table is None:
        table = triple_quasiprob(state, bases)

    born = {}
    for position in (1, 2, 3):
        marginal = table.marginal((position,))
        born[position] = max(
            abs(marginal[(m,)] - state.born(bases[position - 1].projector(m)))
            for m in OUTCOMES
        )

    mh, luders = {}, {}
    for a, b in PAIRS:
        marginal = table.marginal((a, b))
        pair_table = two_time_table(state, bases[a - 1], bases[b - 1])
        name = f"{a}{b}"
        mh[name] = max(abs(marginal[key] - pair_table[key]) for key in marginal)
        luders[name] = max(
            abs(marginal[(m_a, m_b)] - _luders_pair_prob(
                state, bases[a - 1], bases[b - 1], m_a, m_b
            ))
            for m_a, m_b in marginal
        )

    return TripleMarginalReport(born=born, mh=mh, luders=luders, tol=tol.identity)


@dataclass(frozen=True)
class NSITReport:
    """Marginal residuals of a two-time distribution.

    The quasiprobability residuals vanish in quantum theory, while the sequential
    gap generally does not.
    """
    later: float
    """``max |Σ_{m_i} q(m_i, m_j) - Tr[π_{m_j} ρ]|``."""
    earlier: float
    """``max |Σ_{m_j} q(m_i, m_j) - Tr[π_{m_i} ρ]|``."""
    sequential_gap: float
    """``max |Σ_{m_i} p(m_i, m_j) - Tr[π_{m_j} ρ]|`` of the sequential probabilities."""

    def as_dict(self) -> dict:
        return asdict(self)


def nsit_check_two_time(scenario: LGScenario, i: int, j: int) -> NSITReport:
    """No-signalling-in-time residuals of the pair ``(i, j)``."""
    table = scenario_two_time_table(scenario, i, j)
    state = scenario.initial
    obs_i, obs_j = scenario.observable(i), scenario.observable(j)
    later = table.marginal((2,))
    earlier = table.marginal((1,))

    return NSITReport(
        later=max(abs(later[(m,)] - state.born(obs_j.projector(m))) for m in OUTCOMES),
        earlier=max(
            abs(earlier[(m,)] - state.born(obs_i.projector(m))) for m in OUTCOMES
        ),
        sequential_gap=max(
            abs(
                sum(sequential_joint_prob(scenario, i, j, m_i, m_j) for m_i in OUTCOMES)
                - state.born(obs_j.projector(m_j))
            )
            for m_j in OUTCOMES
        ),
    )
