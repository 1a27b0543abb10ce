"""Scaled number structures and a spacetime value field, with the calculus,
geometry, quantum evolution and flat cosmology that follow from them."""

from . import cosmology, field, geometry, quantum, scaled_numbers
from .errors import (
    ConfigInvalid,
    InvalidBoundaries,
    InvalidEnergy,
    LeftDomain,
    MixedScales,
    NonFiniteIntegrand,
    NotInBaseSet,
    NotNormalized,
    OutOfDomain,
    OutOfRange,
    StepUnstable,
    ValueFieldError,
)

__version__ = "0.1.0"

__all__ = [
    "cosmology",
    "field",
    "geometry",
    "quantum",
    "scaled_numbers",
    "ValueFieldError",
    "ConfigInvalid",
    "InvalidBoundaries",
    "InvalidEnergy",
    "LeftDomain",
    "MixedScales",
    "NonFiniteIntegrand",
    "NotInBaseSet",
    "NotNormalized",
    "OutOfDomain",
    "OutOfRange",
    "StepUnstable",
    "__version__",
]
