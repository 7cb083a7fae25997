"""
Range inclusion and Douglas-type factorization S = V T.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT_TOL, RANK_RTOL
from ..errors import DimensionMismatchError, InclusionFailureError
from .inverses import moore_penrose
from .spaces import LinearMap, adjoint, spectral_norm
from .subspaces import kernel_basis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InclusionResult:
    """Verdict of a range test together with the residual it was judged on."""

    holds: bool
    residual: float
    threshold: float

    def __bool__(self) -> bool:
        return self.holds


def range_inclusion(
    B: LinearMap, A: LinearMap, tol: float = DEFAULT_TOL, rtol: float = RANK_RTOL
) -> InclusionResult:
    """Range B ⊆ Range A, judged on ||(I - A A^+) B||_2 <= tol * max(1, ||B||_2)."""
    if B.codomain.dim != A.codomain.dim:
        raise DimensionMismatchError(
            "Range inclusion needs a shared codomain",
            expected=A.codomain.dim,
            actual=B.codomain.dim,
        )
    a, b = A.entries, B.entries
    leak = b - a @ (moore_penrose(A, rtol).entries @ b)
    residual = spectral_norm(leak)
    threshold = tol * max(1.0, spectral_norm(b))
    return InclusionResult(bool(residual <= threshold), residual, threshold)


def factor_residual(S: LinearMap, T: LinearMap, rtol: float = RANK_RTOL) -> float:
    """||S - S T^+ T||_2: zero iff ker T ⊆ ker S."""
    s = S.entries
    return spectral_norm(s - s @ moore_penrose(T, rtol).entries @ T.entries)


def norm_domination(
    S: LinearMap, T: LinearMap, tol: float = DEFAULT_TOL, rtol: float = RANK_RTOL
) -> float:
    """
    Smallest k with ||Sx||_2 <= k ||Tx||_2 for all x, or inf when none exists.

    A kernel vector of T that S does not annihilate makes k infinite.
    """
    _require_shared_domain(S, T)
    kernel = kernel_basis(T.entries, rtol)
    if kernel.shape[1] and spectral_norm(S.entries @ kernel) > tol * max(1.0, spectral_norm(S.entries)):
        return math.inf
    return spectral_norm(S.entries @ moore_penrose(T, rtol).entries)


def _require_shared_domain(S: LinearMap, T: LinearMap) -> None:
    if S.domain.dim != T.domain.dim:
        raise DimensionMismatchError(
            "S and T must share a domain", expected=T.domain.dim, actual=S.domain.dim
        )


def douglas_factor(
    S: LinearMap, T: LinearMap, tol: float = DEFAULT_TOL, rtol: float = RANK_RTOL
) -> LinearMap:
    """
    V with S = V T, returned as V = S T^+.

    Raises:
        InclusionFailureError: Range S* is not contained in Range T*
    """
    _require_shared_domain(S, T)
    inclusion = range_inclusion(adjoint(S), adjoint(T), tol, rtol)
    if not inclusion:
        raise InclusionFailureError(
            "Range S* ⊄ Range T*: S does not factor through T",
            residual=inclusion.residual,
            tol=inclusion.threshold,
        )
    V = S.entries @ moore_penrose(T, rtol).entries
    residual = spectral_norm(S.entries - V @ T.entries)
    threshold = tol * max(1.0, spectral_norm(S.entries))
    if residual > threshold:
        raise InclusionFailureError("Factorization residual above tolerance", residual, threshold)
    logger.debug("douglas factorization", extra={"operation": "douglas_factor", "residual": residual})
    return LinearMap(T.codomain, S.codomain, V)
