"""
Integral periods, mirror map and LCSL monodromy of a chart.
"""
from .mirror_map import MirrorMap, instanton_free_check, invert_mirror_map, mirror_map
from .monodromy import (
    MirrorReport,
    MonodromyData,
    is_lcsl,
    lcsl_monodromy,
    monodromy_data,
    monodromy_weight_filtration,
    nilpotent_log,
    verify_mirror_isomorphism,
    weight_filtration,
)
from .symplectic import (
    PeriodVector,
    SymplecticBasis,
    central_charge,
    period_vector,
    period_vector_direct,
    rr_pairing,
    symbolic_parameters,
    symplectic_form,
)

__all__ = [
    "MirrorMap",
    "MirrorReport",
    "MonodromyData",
    "PeriodVector",
    "SymplecticBasis",
    "central_charge",
    "instanton_free_check",
    "invert_mirror_map",
    "is_lcsl",
    "lcsl_monodromy",
    "mirror_map",
    "monodromy_data",
    "monodromy_weight_filtration",
    "nilpotent_log",
    "period_vector",
    "period_vector_direct",
    "rr_pairing",
    "symbolic_parameters",
    "symplectic_form",
    "verify_mirror_isomorphism",
    "weight_filtration",
]
