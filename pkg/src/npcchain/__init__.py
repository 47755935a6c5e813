"""Exact feasibility engine for nonpositively curved metrics on chained
graph-manifolds, with a numeric cross-check oracle and cusp-curvature
verification tools."""

from .lattice import (
    DegenerateGeodesicError,
    IdealArc,
    LatticeVector,
    ProjectivePoint,
    QuadraticForm,
    ZeroVectorError,
    arc_contains,
    chords_cross,
    cyclic_orient,
    det,
    direction_to_disk,
    form_to_disk,
    geodesic_form,
    normalize_primitive,
    orthogonal_direction,
)
from .decider import (
    ConvexStage,
    GluingData,
    IncompatibleClassesError,
    InfeasibleInstanceError,
    InvalidInstanceError,
    SeifertBoundaryData,
    Verdict,
    WitnessCheck,
    WitnessConfiguration,
    check_witness,
    construct_witness,
    decide,
    initial_stage,
    ladder_family_instance,
    membership,
    n0_basis_criterion,
    promote_conformal_to_flat,
    propagate_shadow,
    seifert_boundary_constraint,
    validate_instance,
)

__all__ = [
    "ConvexStage",
    "DegenerateGeodesicError",
    "GluingData",
    "IdealArc",
    "IncompatibleClassesError",
    "InfeasibleInstanceError",
    "InvalidInstanceError",
    "LatticeVector",
    "ProjectivePoint",
    "QuadraticForm",
    "SeifertBoundaryData",
    "Verdict",
    "WitnessCheck",
    "WitnessConfiguration",
    "ZeroVectorError",
    "arc_contains",
    "check_witness",
    "chords_cross",
    "construct_witness",
    "cyclic_orient",
    "decide",
    "det",
    "direction_to_disk",
    "form_to_disk",
    "geodesic_form",
    "initial_stage",
    "ladder_family_instance",
    "membership",
    "n0_basis_criterion",
    "normalize_primitive",
    "orthogonal_direction",
    "promote_conformal_to_flat",
    "propagate_shadow",
    "seifert_boundary_constraint",
    "validate_instance",
]

__version__ = "0.1.0"
