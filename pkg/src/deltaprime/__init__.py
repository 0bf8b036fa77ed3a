"""Rectangular regularizations of the delta' point interaction.

The package builds the three-slab potentials, checks their distributional
limits, computes exact scattering through transfer matrices, solves the
transparency equations and designs potentials that transmit at a chosen
coupling.
"""
from .errors import (
    ConstraintViolation,
    DeltaPrimeError,
    DomainError,
    InfeasibleTarget,
    NotFound,
    PoleError,
    PreconditionError,
    SingularScattering,
    SolverFailure,
    VerificationFailed,
)
from .potential import (
    Geometry,
    PiecewisePotential,
    Rectangle,
    RegularizationParams,
    build_total_potential,
    evaluate,
    geometry,
)

__version__ = "0.1.0"

__all__ = [
    "ConstraintViolation",
    "DeltaPrimeError",
    "DomainError",
    "Geometry",
    "InfeasibleTarget",
    "NotFound",
    "PiecewisePotential",
    "PoleError",
    "PreconditionError",
    "Rectangle",
    "RegularizationParams",
    "SingularScattering",
    "SolverFailure",
    "VerificationFailed",
    "build_total_potential",
    "evaluate",
    "geometry",
]
