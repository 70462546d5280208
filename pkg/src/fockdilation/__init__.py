"""Proper Markov semigroups from dilations of a truncated grid Fock product system."""
from .grid_fock import (
    FockVector,
    GridSpec,
    IntervalSpec,
    OccupationBasis,
    TruncationOverflow,
    exponential_vector,
    factorize,
    multiply,
    vacuum,
)
from .product_system import ProductSystem, Unit, f_section, m_integral, onb_section
from .direct_integral import Section, apply_id_tensor_adjoint, corollary_composite
from .dilation import BigSpace, DiscreteDilation
from .markov_compression import (
    Report,
    observation_crosscheck,
    semigroup_check,
    shifted_compression_check,
    stinespring,
    verify_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "FockVector",
    "GridSpec",
    "IntervalSpec",
    "OccupationBasis",
    "TruncationOverflow",
    "exponential_vector",
    "factorize",
    "multiply",
    "vacuum",
    "ProductSystem",
    "Unit",
    "f_section",
    "m_integral",
    "onb_section",
    "Section",
    "apply_id_tensor_adjoint",
    "corollary_composite",
    "BigSpace",
    "DiscreteDilation",
    "Report",
    "observation_crosscheck",
    "semigroup_check",
    "shifted_compression_check",
    "stinespring",
    "verify_theorem",
]
