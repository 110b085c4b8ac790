"""Construct, verify, certify and search for almost-equidistant point sets."""

from .core import (
    PointSet,
    Tolerance,
    UnitDistanceGraph,
    barycenter_identity_residual,
    diameter,
    is_almost_equidistant,
    matrix_u,
    squared_distance_matrix,
    unit_distance_graph,
)
from .constructions import alpha_d, moser_spindle, regular_unit_simplex, scale_k, two_simplex_union
from .certificate import certify
from .errors import (
    AeqError,
    BudgetExceededError,
    ConstructionError,
    GeometricInfeasibilityError,
    InvalidInputError,
    NumericFailureError,
    PreconditionError,
)
from .search import SearchConfig, SearchResult, search

__version__ = "0.1.0"

__all__ = [
    "AeqError",
    "BudgetExceededError",
    "ConstructionError",
    "GeometricInfeasibilityError",
    "InvalidInputError",
    "NumericFailureError",
    "PointSet",
    "PreconditionError",
    "SearchConfig",
    "SearchResult",
    "Tolerance",
    "UnitDistanceGraph",
    "alpha_d",
    "barycenter_identity_residual",
    "certify",
    "diameter",
    "is_almost_equidistant",
    "matrix_u",
    "moser_spindle",
    "regular_unit_simplex",
    "scale_k",
    "search",
    "squared_distance_matrix",
    "two_simplex_union",
    "unit_distance_graph",
]
