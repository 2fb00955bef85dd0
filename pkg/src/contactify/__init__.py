"""Coadjoint orbits of U(n), their integrality, and contactifications of sphere dynamics."""

from . import contact, dynamics, integrality, lie, orbit
from ._checks import (
    AmbiguityError,
    ContactifyError,
    DimensionMismatch,
    InvariantViolation,
    StepRejected,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "ContactifyError",
    "DimensionMismatch",
    "InvariantViolation",
    "StepRejected",
    "contact",
    "dynamics",
    "integrality",
    "lie",
    "orbit",
]
