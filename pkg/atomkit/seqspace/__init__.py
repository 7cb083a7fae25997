"""
Triangular sequence spaces X_d and the analysis operator into them.
"""
from .analysis import (
    XdFrameBounds,
    analyze,
    array_norm,
    embed_classical,
    level_analysis_map,
    limit_analysis_map,
    reconstruction_operator,
    stacked_analysis_map,
    xd_bessel_bound,
    xd_frame_bounds,
)
from .scheme import (
    NormMode,
    SequenceNormConfig,
    TriangularArray,
    TriangularFunctionalFamily,
    TriangularScheme,
)

__all__ = [
    "NormMode",
    "SequenceNormConfig",
    "TriangularArray",
    "TriangularFunctionalFamily",
    "TriangularScheme",
    "XdFrameBounds",
    "analyze",
    "array_norm",
    "embed_classical",
    "level_analysis_map",
    "limit_analysis_map",
    "reconstruction_operator",
    "stacked_analysis_map",
    "xd_bessel_bound",
    "xd_frame_bounds",
]
