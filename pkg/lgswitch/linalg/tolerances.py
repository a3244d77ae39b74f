"""
The single record of numerical tolerances used throughout the package.

Chained interferometer and search pipelines accumulate rounding, which is why they are
checked against the looser `Tolerances.pipeline` instead of `Tolerances.identity`.
"""
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances for identity checks."""
    identity: float = 1e-12
    """Identities of single operators, e.g. ``U†U = I`` or ``π² = π``."""
    pipeline: float = 1e-10
    """Results of chained computations, e.g. switch amplitudes vs. closed forms."""
    overlap: float = 1e-12
    """Magnitude below which an overlap counts as vanishing."""

    @classmethod
    def from_mapping(cls, mapping: Optional[Dict[str, Any]]) -> "Tolerances":
        """Create a record from a (partial) mapping, ignoring unknown keys."""
        if not mapping:
            return cls()
        names = {field.name for field in fields(cls)}
        return replace(cls(), **{
            key: float(value) for key, value in mapping.items() if key in names
        })


DEFAULT_TOLERANCES = Tolerances()
