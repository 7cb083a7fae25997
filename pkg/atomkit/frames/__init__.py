"""
Vector families, their synthesis/analysis operators and frame constants.
"""
from .family import VectorFamily, mercedes_benz, shift_family, standard_basis
from .operators import (
    FrameBounds,
    KFrameBounds,
    analysis_operator,
    bessel_bound,
    canonical_dual,
    dual_analysis,
    frame_bounds,
    frame_operator,
    is_tight,
    kframe_bounds,
    synthesis_operator,
)

__all__ = [
    "FrameBounds",
    "KFrameBounds",
    "VectorFamily",
    "analysis_operator",
    "bessel_bound",
    "canonical_dual",
    "dual_analysis",
    "frame_bounds",
    "frame_operator",
    "is_tight",
    "kframe_bounds",
    "mercedes_benz",
    "shift_family",
    "standard_basis",
]
