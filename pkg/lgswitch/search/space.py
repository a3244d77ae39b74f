"""
Parameterization of the precessing-qubit scenarios.

A point of the space fixes the initial state by its Bloch angles and purity, the
Hamiltonian ``H = (ω/2) n·σ`` by the angles of its axis ``n`` and the frequency ``ω``,
the evolution angles ``θ₁₂ = ω(t₂ - t₁)`` and ``θ₂₃ = ω(t₃ - t₂)``, and the unsharpness
``λ``. Every parameter is either free within bounds or fixed.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..lgengine.observables import LGScenario, QuantumState

logger = logging.getLogger(__name__)

TWO_PI = 2. * np.pi

PARAMETERS: Dict[str, Tuple[float, float]] = {
    "state_theta": (0., np.pi),
    "state_phi": (0., TWO_PI),
    "purity": (0., 1.),
    "axis_theta": (0., np.pi),
    "axis_phi": (0., TWO_PI),
    "omega": (0., 2.),
    "theta12": (0., TWO_PI),
    "theta23": (0., TWO_PI),
    "lam": (1e-6, 1.),
}
"""Parameter names in evaluation order, with their widest bounds."""

PERIODIC = frozenset({"state_phi", "axis_phi", "theta12", "theta23"})
"""Parameters living on ``[0, 2π)``, whose upper bound is excluded."""

DEFAULT_VALUES: Dict[str, float] = {
    "state_theta": 0.,
    "state_phi": 0.,
    "purity": 1.,
    "axis_theta": np.pi / 2.,
    "axis_phi": np.pi / 2.,
    "omega": 1.,
    "theta12": np.pi / 3.,
    "theta23": np.pi / 3.,
    "lam": 1.,
}
"""Values of parameters that are neither free nor explicitly fixed. The default axis
is ``y``, so that a ``σ_z`` measurement precesses in the ``xz``-plane."""


class EmptySearchSpaceError(ValueError):
    """Raised when a search space has no free parameter or an empty interval."""


@dataclass(frozen=True)
class SearchSpace:
    """Free parameters with their bounds, fixed parameters with their values."""
    free: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    fixed: Dict[str, float] = field(default_factory=dict)
    equal_spacing: bool = False
    """Enforce ``θ₂₃ = θ₁₂``; ``theta23`` is then neither free nor fixed."""

    def __post_init__(self):
        free, fixed = dict(self.free), dict(self.fixed)
        for name in [*free, *fixed]:
            if name not in PARAMETERS:
                raise ValueError(f"Unknown parameter {name!r}")
        for name in set(free) & set(fixed):
            raise ValueError(f"Parameter {name!r} is both free and fixed")

        if self.equal_spacing:
            free.pop("theta23", None)
            fixed.pop("theta23", None)

        for name, bounds in free.items():
            low, high = (float(b) for b in bounds)
            widest = PARAMETERS[name]
            if low > high:
                raise EmptySearchSpaceError(f"Empty interval [{low}, {high}] for {name}")
            if low < widest[0] or high > widest[1]:
                raise ValueError(f"Bounds of {name} exceed {widest}")
            free[name] = (low, high)

        object.__setattr__(self, "free", free)
        object.__setattr__(self, "fixed", {k: float(v) for k, v in fixed.items()})

    @classmethod
    def from_names(
        cls,
        free: Sequence[str],
        fixed: Optional[Dict[str, float]] = None,
        equal_spacing: bool = False,
    ) -> "SearchSpace":
        """Space in which the parameters ``free`` span their widest bounds."""
        return cls(
            free={name: PARAMETERS[name] for name in free},
            fixed=fixed or {},
            equal_spacing=equal_spacing,
        )

    @property
    def names(self) -> List[str]:
        """Free parameters in the fixed evaluation order."""
        return [name for name in PARAMETERS if name in self.free]

    @property
    def dimension(self) -> int:
        return len(self.free)

    def check_nonempty(self):
        if not self.free:
            raise EmptySearchSpaceError("The search space has no free parameter")

    def is_periodic(self, name: str) -> bool:
        low, high = self.free[name]
        return name in PERIODIC and (low, high) == PARAMETERS[name]

    def grid(self, name: str, resolution: int) -> np.ndarray:
        """Grid points of one free parameter. Full periods exclude their endpoint."""
        low, high = self.free[name]
        endpoint = not self.is_periodic(name)
        return np.linspace(low, high, resolution, endpoint=endpoint)

    def project(self, name: str, value: float) -> float:
        """Wrap periodic parameters and clip bounded ones into the space."""
        low, high = self.free[name]
        if self.is_periodic(name):
            return float(np.mod(value - low, high - low) + low)
        return float(np.clip(value, low, high))

    def contains(self, point: Dict[str, float]) -> bool:
        return all(
            low <= point[name] <= high for name, (low, high) in self.free.items()
        )

    def params(self, values: Sequence[float]) -> Dict[str, float]:
        """Full parameter set from the values of the free parameters."""
        values = list(values)
        if len(values) != self.dimension:
            raise ValueError(f"Expected {self.dimension} values, got {len(values)}")
        params = {**DEFAULT_VALUES, **self.fixed, **dict(zip(self.names, values))}
        if self.equal_spacing:
            params["theta23"] = params["theta12"]
        return params

    def scenario(self, params: Dict[str, float]) -> LGScenario:
        """The scenario at a full parameter set."""
        return build_scenario(params)

    def sample(self, rng: np.random.Generator) -> Dict[str, float]:
        """Random point. Polar angles are drawn with uniform cosine so that
        directions cover the sphere evenly, all else uniformly."""
        values = []
        for name in self.names:
            low, high = self.free[name]
            if name in ("state_theta", "axis_theta"):
                cos_low, cos_high = np.cos(high), np.cos(low)
                values.append(float(np.arccos(rng.uniform(cos_low, cos_high))))
            else:
                values.append(float(rng.uniform(low, high)))
        return self.params(values)


def build_scenario(params: Dict[str, float]) -> LGScenario:
    """Precession scenario with ``t₁ = 0``, ``t₂ = θ₁₂/ω``, ``t₃ = (θ₁₂ + θ₂₃)/ω``
    (and unit times for ``ω = 0``) and the base observable ``σ_z``."""
    params = {**DEFAULT_VALUES, **params}
    omega = params["omega"]
    scale = 1. / omega if omega > 0. else 1.
    axis_theta, axis_phi = params["axis_theta"], params["axis_phi"]
    axis = [
        np.sin(axis_theta) * np.cos(axis_phi),
        np.sin(axis_theta) * np.sin(axis_phi),
        np.cos(axis_theta),
    ]
    return LGScenario.precession(
        initial=QuantumState.from_bloch(
            params["state_theta"], params["state_phi"], params["purity"],
        ),
        axis=axis,
        omega=omega,
        times=(0., scale * params["theta12"], scale * (params["theta12"] + params["theta23"])),
        lam=params["lam"],
    )
