"""
Regular triangulations, secondary fans and chart bases.
"""
from .base import (
    Triangulation,
    gkz_vector,
    is_maximal,
    is_valid_triangulation,
    normalized_volume,
    placing_triangulation,
    regular_from_heights,
    total_volume,
)
from .circuits import Circuit, circuits, flips, interior_walls
from .enumeration import RegularTriangulation, enumerate_regular_triangulations
from .regularity import RegularityCertificate, is_regular, verify_certificate
from .secondary import (
    ChartBasis,
    SecondaryCone,
    SecondaryFan,
    chart_basis,
    chart_monomials,
    secondary_polytope,
)

__all__ = [
    "Triangulation",
    "gkz_vector",
    "is_maximal",
    "is_valid_triangulation",
    "normalized_volume",
    "placing_triangulation",
    "regular_from_heights",
    "total_volume",
    "Circuit",
    "circuits",
    "flips",
    "interior_walls",
    "RegularTriangulation",
    "enumerate_regular_triangulations",
    "RegularityCertificate",
    "is_regular",
    "verify_certificate",
    "ChartBasis",
    "SecondaryCone",
    "SecondaryFan",
    "chart_basis",
    "chart_monomials",
    "secondary_polytope",
]
