"""
Synthesis, analysis and frame-bound estimation for vector families.

The coefficient space of a family is l^q(M); the dual-side coefficient
space Y_d is its dual l^{q'}(M), so the analysis map f -> {f(x_n)} runs
from X* = l^{p'}(d) into l^{q'}(M).
"""
import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..config import DEFAULT_TOL, RANK_RTOL
from ..errors import ValidationAtomkitError, raise_dimension_mismatch
from ..linalg.bounds import BoundEstimate, BoundMethod, lower_homogeneous_bound, operator_norm
from ..linalg.factorization import norm_domination
from ..linalg.spaces import LinearMap, PNormSpace, adjoint
from ..linalg.subspaces import numerical_rank
from .family import VectorFamily

logger = logging.getLogger(__name__)


def synthesis_operator(F: VectorFamily) -> LinearMap:
    """T{c} = sum c_n x_n, from l^q(M) to the space."""
    return LinearMap(PNormSpace(F.M, F.q), F.space, F.atoms)


def analysis_operator(F: VectorFamily) -> LinearMap:
    """f -> {f(x_n)}, from X* to Y_d; the adjoint of synthesis."""
    return adjoint(synthesis_operator(F))


def dual_analysis(F: VectorFamily, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.shape[0] != F.space.dim:
        raise_dimension_mismatch(
            "Functional does not act on the family's space", expected=F.space.dim, actual=list(f.shape)
        )
    return F.atoms.T @ f


def bessel_bound(F: VectorFamily, samples: Optional[int] = None) -> BoundEstimate:
    """Smallest B with ||{f(x_n)}||_{Y_d} <= B ||f||_{X*}."""
    return operator_norm(analysis_operator(F), samples=samples)


class FrameBounds(BaseModel):
    """Lower and upper constants of the frame inequality in norm form."""

    model_config = ConfigDict(frozen=True)

    A: BoundEstimate
    B: BoundEstimate
    onto: bool

    @model_validator(mode="after")
    def _lower_matches_onto(self) -> "FrameBounds":
        if (self.A.lower > 0) != self.onto:
            raise ValueError(
                f"lower frame constant {self.A.lower} disagrees with surjectivity of synthesis ({self.onto})"
            )
        return self

    def squared(self) -> "FrameBounds":
        """Classical Hilbert constants A^2, B^2 of sum |<f, x_n>|^2."""
        return FrameBounds(A=self.A.squared(), B=self.B.squared(), onto=self.onto)


def frame_bounds(F: VectorFamily, samples: Optional[int] = None, rtol: float = RANK_RTOL) -> FrameBounds:
    analysis = analysis_operator(F)
    lower = lower_homogeneous_bound(analysis, samples=samples, rtol=rtol)
    upper = operator_norm(analysis, samples=samples)
    onto = numerical_rank(F.atoms, rtol) == F.space.dim
    logger.debug(
        "frame bounds",
        extra={"operation": "frame_bounds", "verdict": onto, "residual": upper.upper - lower.lower},
    )
    return FrameBounds(A=lower, B=upper, onto=onto)


def _require_hilbert(F: VectorFamily, operation: str) -> None:
    if not (F.space.p == 2 and F.q == 2):
        raise ValidationAtomkitError(
            f"{operation} is defined for p = q = 2 only",
            {"p": str(F.space.p), "q": str(F.q)},
        )


class KFrameBounds(BaseModel):
    """
    Constants of A ||K* x||^2 <= sum |<x, x_n>|^2 <= B ||x||^2.

    A is None when K = 0 and the lower inequality is vacuous.
    """

    model_config = ConfigDict(frozen=True)

    A: Optional[BoundEstimate]
    B: BoundEstimate

    @property
    def unbounded_lower(self) -> bool:
        return self.A is None

    @property
    def is_kframe(self) -> bool:
        return self.A is None or self.A.lower > 0


def kframe_bounds(
    F: VectorFamily, K: LinearMap, tol: float = DEFAULT_TOL, rtol: float = RANK_RTOL
) -> KFrameBounds:
    """
    Hilbert K-frame constants.

    A is the squared smallest generalized singular value of the pair
    (analysis map, K*) on (ker K*)^perp, i.e. 1 / sup ||K* x||^2 / ||T* x||^2.
    """
    _require_hilbert(F, "kframe_bounds")
    d = F.space.dim
    if K.shape != (d, d):
        raise_dimension_mismatch("K must map the family's space to itself", expected=[d, d], actual=list(K.shape))
    upper = bessel_bound(F).squared()
    k_star = K.entries.T
    if not np.any(k_star):
        return KFrameBounds(A=None, B=upper)

    analysis = analysis_operator(F)
    domination = norm_domination(
        LinearMap(analysis.domain, PNormSpace(d), k_star), analysis, tol=tol, rtol=rtol
    )
    if math.isinf(domination):
        # some x with T* x = 0 still has K* x != 0
        lower = BoundEstimate.exactly(0.0, BoundMethod.SVD)
    else:
        lower = BoundEstimate.exactly(1.0 / domination**2, BoundMethod.SVD)
    return KFrameBounds(A=lower, B=upper)


def frame_operator(F: VectorFamily) -> LinearMap:
    """S = T T* on the space."""
    _require_hilbert(F, "frame_operator")
    return LinearMap(F.space, F.space, F.atoms @ F.atoms.T)


def canonical_dual(F: VectorFamily, rtol: float = RANK_RTOL) -> VectorFamily:
    """g_n = S^{-1} x_n, so that x = sum <x, g_n> x_n."""
    S = frame_operator(F).entries
    if numerical_rank(S, rtol) < F.space.dim:
        raise ValidationAtomkitError("Canonical dual needs a frame: synthesis is not onto")
    return VectorFamily(F.space, np.linalg.solve(S, F.atoms), F.q)


def is_tight(F: VectorFamily, tol: float = DEFAULT_TOL) -> bool:
    bounds = frame_bounds(F)
    if not bounds.onto:
        return False
    return abs(bounds.B.upper - bounds.A.lower) <= tol * max(1.0, bounds.B.upper)
