"""Plane similarities and straightedge constructions of their fixed points."""

from .construction import (
    ConstructionTrace,
    WitnessTriangles,
    collinearity_witness,
    dilation_center,
    fixed_point,
    fixed_point_algorithm1,
    fixed_point_via_theorem,
    reflection_axis,
    rotation_angle_at,
    witness_triangles,
)
from .geom_core import DEFAULT_TOL, Line, Point, Tolerances, Triangle
from .harness import GenConfig, Report, gen_similarity, run_equivalence, run_invariants
from .similarity import (
    FixedPointResult,
    Kind,
    Method,
    Similarity,
    classify,
    compose,
    fixed_point_algebraic,
    from_correspondence,
    inverse,
)

__all__ = [
    "ConstructionTrace", "WitnessTriangles", "collinearity_witness", "dilation_center",
    "fixed_point", "fixed_point_algorithm1", "fixed_point_via_theorem", "reflection_axis",
    "rotation_angle_at", "witness_triangles",
    "DEFAULT_TOL", "Line", "Point", "Tolerances", "Triangle",
    "GenConfig", "Report", "gen_similarity", "run_equivalence", "run_invariants",
    "FixedPointResult", "Kind", "Method", "Similarity", "classify", "compose",
    "fixed_point_algebraic", "from_correspondence", "inverse",
]
