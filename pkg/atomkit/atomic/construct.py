"""
Constructions of atomic systems for K.

From a Bessel family (coefficients S = T^+ K + W - T^+ T W), from an
X_d-Bessel family (atoms T = K S^+ + W (I - S S^+)), and from the range
condition alone (K* = theta T*).
"""
import logging
from typing import Optional

import numpy as np

from ..config import DEFAULT_TOL, RANK_RTOL
from ..errors import DimensionMismatchError, InclusionFailureError, RangeEqualityError
from ..frames.family import VectorFamily
from ..frames.operators import synthesis_operator
from ..linalg.factorization import InclusionResult, douglas_factor, range_inclusion
from ..linalg.inverses import moore_penrose
from ..linalg.spaces import LinearMap, PNormSpace, adjoint, spectral_norm
from ..seqspace.analysis import embed_classical, limit_analysis_map
from ..seqspace.scheme import SequenceNormConfig, TriangularFunctionalFamily
from .verify import scaled_tol

logger = logging.getLogger(__name__)


def _check_K(K: LinearMap, space: PNormSpace) -> None:
    if K.shape != (space.dim, space.dim):
        raise DimensionMismatchError(
            "K must map the space to itself", expected=[space.dim, space.dim], actual=list(K.shape)
        )


def _entries_or_zero(W: Optional[LinearMap], shape) -> np.ndarray:
    if W is None:
        return np.zeros(shape)
    if W.shape != shape:
        raise DimensionMismatchError("W does not conform", expected=list(shape), actual=list(W.shape))
    return W.entries


def necessary_range_test(
    family: VectorFamily, K: LinearMap, tol: float = DEFAULT_TOL, rtol: float = RANK_RTOL
) -> InclusionResult:
    """Range K ⊆ Range T; every atomic system for K satisfies it."""
    _check_K(K, family.space)
    return range_inclusion(K, synthesis_operator(family), tol, rtol)


def e3_coefficient_map(
    family: VectorFamily,
    K: LinearMap,
    W: Optional[LinearMap] = None,
    tol: float = DEFAULT_TOL,
    rtol: float = RANK_RTOL,
) -> LinearMap:
    """
    S = T^+ K + W - T^+ T W, from the space into l^q(M), with T S = K.

    Raises:
        InclusionFailureError: Range K is not contained in Range T
    """
    _check_K(K, family.space)
    T = synthesis_operator(family)
    inclusion = range_inclusion(K, T, tol, rtol)
    if not inclusion:
        raise InclusionFailureError(
            "Range K ⊄ Range T: no Bessel coefficients reproduce K",
            residual=inclusion.residual,
            tol=inclusion.threshold,
        )
    t, k = T.entries, K.entries
    w = _entries_or_zero(W, t.T.shape)
    # W + T^+ (K - T W) evaluates the same map and returns W bit-close when T W = K
    s = w + moore_penrose(T, rtol).entries @ (k - t @ w)
    residual = spectral_norm(t @ s - k)
    if residual > scaled_tol(tol, k):
        raise InclusionFailureError("T S = K fails after construction", residual, scaled_tol(tol, k))
    return LinearMap(family.space, T.domain, s)


def construct_from_bessel(
    family: VectorFamily,
    K: LinearMap,
    W: Optional[LinearMap] = None,
    tol: float = DEFAULT_TOL,
) -> TriangularFunctionalFamily:
    """h_n = S*(e_n*), the n-th coordinate of the coefficient map, embedded level by level."""
    S = e3_coefficient_map(family, K, W, tol)
    logger.debug("bessel construction", extra={"operation": "construct_from_bessel"})
    return embed_classical(S.entries, family.space)


def range_equality(
    K: LinearMap, S: LinearMap, tol: float = DEFAULT_TOL, rtol: float = RANK_RTOL
) -> tuple:
    """Range K* = Range S*, as both inclusions."""
    k_star, s_star = adjoint(K), adjoint(S)
    return range_inclusion(k_star, s_star, tol, rtol), range_inclusion(s_star, k_star, tol, rtol)


def e4_synthesis_map(
    H: TriangularFunctionalFamily,
    K: LinearMap,
    W: Optional[LinearMap] = None,
    cfg: Optional[SequenceNormConfig] = None,
    tol: float = DEFAULT_TOL,
    rtol: float = RANK_RTOL,
) -> LinearMap:
    """
    T = K S^+ + W (I - S S^+), from l^q(m_N) into the space, with T S = K.

    S is the final-level analysis map of H.

    Raises:
        RangeEqualityError: Range K* and the span of the final functionals differ
    """
    cfg = cfg or SequenceNormConfig()
    _check_K(K, H.space)
    S = limit_analysis_map(H, cfg.q)
    forward, backward = range_equality(K, S, tol, rtol)
    if not (forward and backward):
        raise RangeEqualityError(
            "Range K* differs from the span of the functionals",
            forward_residual=forward.residual,
            backward_residual=backward.residual,
            tol=tol,
        )
    s, k = S.entries, K.entries
    s_pinv = moore_penrose(S, rtol).entries
    w = _entries_or_zero(W, s.T.shape)
    t = k @ s_pinv + w @ (np.eye(s.shape[0]) - s @ s_pinv)
    residual = spectral_norm(t @ s - k)
    if residual > scaled_tol(tol, k):
        raise RangeEqualityError("T S = K fails after construction", residual, 0.0, scaled_tol(tol, k))
    return LinearMap(S.codomain, H.space, t)


def e4_proof_identity_residual(
    H: TriangularFunctionalFamily, K: LinearMap, q: float = 2.0, rtol: float = RANK_RTOL
) -> float:
    """||S* (S^+)* K* - K*||_2."""
    s = limit_analysis_map(H, q).entries
    s_pinv = moore_penrose(LinearMap.from_matrix(s), rtol).entries
    k_star = K.entries.T
    return spectral_norm(s.T @ s_pinv.T @ k_star - k_star)


def construct_from_xd_bessel(
    H: TriangularFunctionalFamily,
    K: LinearMap,
    W: Optional[LinearMap] = None,
    cfg: Optional[SequenceNormConfig] = None,
    tol: float = DEFAULT_TOL,
) -> VectorFamily:
    """Atoms x_n = T(e_n) for the E4 synthesis map."""
    cfg = cfg or SequenceNormConfig()
    T = e4_synthesis_map(H, K, W, cfg, tol)
    logger.debug("xd-bessel construction", extra={"operation": "construct_from_xd_bessel"})
    return VectorFamily(H.space, T.entries, cfg.q)


def converse_construction(
    family: VectorFamily, K: LinearMap, tol: float = DEFAULT_TOL, rtol: float = RANK_RTOL
) -> TriangularFunctionalFamily:
    """
    theta with K* = theta T*, then h_n = theta(e_n*).

    Raises:
        InclusionFailureError: Range K ⊄ Range T
    """
    _check_K(K, family.space)
    T = synthesis_operator(family)
    theta = douglas_factor(adjoint(K), adjoint(T), tol, rtol)
    return embed_classical(theta.entries.T, family.space)
