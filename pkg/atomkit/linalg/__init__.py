"""
Dense real linear algebra over coordinate l^p spaces.
"""
from .bounds import (
    BoundEstimate,
    BoundMethod,
    lower_homogeneous_bound,
    operator_norm,
    sampled_infimum,
)
from .factorization import (
    InclusionResult,
    douglas_factor,
    factor_residual,
    norm_domination,
    range_inclusion,
)
from .inverses import ComplementPair, generalized_inverse, moore_penrose, projection_checks
from .spaces import (
    INF,
    LinearMap,
    PNormSpace,
    adjoint,
    compose,
    conjugate_exponent,
    parse_exponent,
    spectral_norm,
    vector_norm,
)
from .subspaces import kernel_basis, min_principal_angle, numerical_rank, range_basis

__all__ = [
    "INF",
    "BoundEstimate",
    "BoundMethod",
    "ComplementPair",
    "InclusionResult",
    "LinearMap",
    "PNormSpace",
    "adjoint",
    "compose",
    "conjugate_exponent",
    "douglas_factor",
    "factor_residual",
    "generalized_inverse",
    "kernel_basis",
    "lower_homogeneous_bound",
    "min_principal_angle",
    "moore_penrose",
    "norm_domination",
    "numerical_rank",
    "operator_norm",
    "parse_exponent",
    "projection_checks",
    "range_basis",
    "range_inclusion",
    "sampled_infimum",
    "spectral_norm",
    "vector_norm",
]
