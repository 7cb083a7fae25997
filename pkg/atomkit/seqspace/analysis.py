"""
Analysis operator of a triangular functional family and its X_d bounds.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..config import DEFAULT_TOL, RANK_RTOL, settings
from ..errors import DimensionMismatchError, InclusionFailureError, ValidationAtomkitError
from ..linalg.bounds import (
    BoundEstimate,
    BoundMethod,
    lower_homogeneous_bound,
    operator_norm,
    sampled_infimum,
)
from ..linalg.inverses import moore_penrose
from ..linalg.spaces import INF, LinearMap, PNormSpace
from ..linalg.subspaces import numerical_rank
from .scheme import (
    NormMode,
    SequenceNormConfig,
    TriangularArray,
    TriangularFunctionalFamily,
    TriangularScheme,
)

logger = logging.getLogger(__name__)


def analyze(H: TriangularFunctionalFamily, x) -> TriangularArray:
    """{h_{n,i}(x)} for every level n and index i."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != H.space.dim:
        raise DimensionMismatchError(
            f"Vector of shape {x.shape} does not live in {H.space}",
            expected=H.space.dim,
            actual=list(x.shape),
        )
    return TriangularArray(H.scheme, tuple(row @ x for row in H.rows))


def array_norm(a: TriangularArray, cfg: SequenceNormConfig) -> float:
    if cfg.mode == NormMode.FLAT:
        return float(np.linalg.norm(a.flat(), ord=cfg.q))
    return float(max(np.linalg.norm(row, ord=cfg.q) for row in a.values))


def stacked_analysis_map(H: TriangularFunctionalFamily, cfg: SequenceNormConfig) -> LinearMap:
    """X -> X_d with every level concatenated, normed by l^q."""
    return LinearMap(H.space, PNormSpace(H.scheme.total, cfg.q), H.stacked_matrix())


def level_analysis_map(H: TriangularFunctionalFamily, n: int, q: float) -> LinearMap:
    return LinearMap(H.space, PNormSpace(H.scheme.level_sizes[n - 1], q), H.level_matrix(n))


def limit_analysis_map(H: TriangularFunctionalFamily, q: float) -> LinearMap:
    """Final level only: the coefficient map fed into synthesis."""
    return level_analysis_map(H, H.scheme.N, q)


def _max_of(estimates: Sequence[BoundEstimate]) -> BoundEstimate:
    top = max(estimates, key=lambda e: e.upper)
    lower = max(e.lower for e in estimates)
    upper = top.upper
    exact = all(e.exact for e in estimates)
    if exact:
        lower = upper
    return BoundEstimate(lower=min(lower, upper), upper=upper, exact=exact, method=top.method)


def xd_bessel_bound(
    H: TriangularFunctionalFamily, cfg: SequenceNormConfig, samples: Optional[int] = None
) -> BoundEstimate:
    """Sandwich on sup_{||x|| = 1} ||analyze(H, x)||_{X_d}."""
    if cfg.mode == NormMode.FLAT:
        return operator_norm(stacked_analysis_map(H, cfg), samples=samples)
    # sup_x max_n ||H_n x|| = max_n ||H_n||
    return _max_of(
        [operator_norm(level_analysis_map(H, n, cfg.q), samples=samples) for n in range(1, H.scheme.N + 1)]
    )


@dataclass(frozen=True)
class XdFrameBounds:
    lower: BoundEstimate
    upper: BoundEstimate

    @property
    def is_frame(self) -> bool:
        return self.lower.lower > 0


def _row_sup_lower(
    H: TriangularFunctionalFamily, cfg: SequenceNormConfig, samples: int, seed: int
) -> BoundEstimate:
    p, q = H.space.p, cfg.q
    stacked = H.stacked_matrix()
    if numerical_rank(stacked, RANK_RTOL) < H.space.dim:
        return BoundEstimate.exactly(0.0, BoundMethod.SVD)

    level_lower = [
        lower_homogeneous_bound(level_analysis_map(H, n, q), samples=samples, seed=seed)
        for n in range(1, H.scheme.N + 1)
    ]
    # concatenation of N rows: ||c||_q <= N^{1/q} max_n ||c_n||_q
    shrink = 1.0 if q == INF else H.scheme.N ** (1.0 / q)
    stacked_lower = lower_homogeneous_bound(stacked_analysis_map(H, cfg), samples=samples, seed=seed)
    lower = max([e.lower for e in level_lower] + [stacked_lower.lower / shrink])

    def ratio(x: np.ndarray) -> float:
        return max(np.linalg.norm(row @ x, ord=q) for row in H.rows) / np.linalg.norm(x, ord=p)

    anchor = np.vstack([H.limit_matrix(), stacked])
    upper = sampled_infimum(ratio, anchor, p, samples, seed)
    # a level whose lower bound is exact and attains the sampled value pins the infimum
    for estimate in level_lower:
        if estimate.exact and abs(estimate.upper - upper) <= 1e-12 * max(1.0, upper):
            return BoundEstimate.exactly(estimate.upper, estimate.method)
    upper = max(upper, lower)
    exact = upper - lower <= 1e-12 * max(1.0, upper)
    return BoundEstimate(
        lower=upper if exact else lower,
        upper=upper,
        exact=exact,
        method=BoundMethod.SAMPLE_POWER_ITERATION,
    )


def xd_frame_bounds(
    H: TriangularFunctionalFamily,
    cfg: SequenceNormConfig,
    samples: Optional[int] = None,
    seed: int = 0,
) -> XdFrameBounds:
    """Lower constant A and upper constant B of the X_d frame inequality."""
    samples = samples if samples is not None else settings.NORM_SAMPLES
    upper = xd_bessel_bound(H, cfg, samples=samples)
    if cfg.mode == NormMode.FLAT:
        lower = lower_homogeneous_bound(stacked_analysis_map(H, cfg), samples=samples, seed=seed)
    else:
        lower = _row_sup_lower(H, cfg, samples, seed)
    logger.debug(
        "X_d frame bounds",
        extra={"operation": "xd_frame_bounds", "residual": upper.upper - lower.lower},
    )
    return XdFrameBounds(lower=lower, upper=upper)


def embed_classical(functionals, space: Optional[PNormSpace] = None) -> TriangularFunctionalFamily:
    """
    Triangular family with m_n = n and row n = (f_1, ..., f_n).

    Args:
        functionals: (M, dim) array or a list of M dual vectors
        space: the space they act on; defaults to l^2(dim)
    """
    f = np.asarray(functionals, dtype=float)
    if f.ndim == 1:
        f = f.reshape(1, -1)
    if f.ndim != 2 or f.shape[0] == 0:
        raise ValidationAtomkitError("embed_classical needs a non-empty list of functionals")
    space = space or PNormSpace(f.shape[1])
    if f.shape[1] != space.dim:
        raise DimensionMismatchError(
            "Functionals must share the space dimension", expected=space.dim, actual=f.shape[1]
        )
    M = f.shape[0]
    return TriangularFunctionalFamily(
        TriangularScheme.classical(M), space, tuple(f[:n] for n in range(1, M + 1))
    )


def reconstruction_operator(
    H: TriangularFunctionalFamily,
    cfg: SequenceNormConfig,
    tol: float = DEFAULT_TOL,
    rtol: float = RANK_RTOL,
) -> LinearMap:
    """
    S: X_d -> X with S(analyze(H, x)) = x on flat coordinates.

    Raises:
        InclusionFailureError: the stacked analysis map is not injective, so H
            is not an X_d-frame and no reconstruction exists
    """
    analysis = stacked_analysis_map(H, cfg)
    left = moore_penrose(analysis, rtol)
    residual = float(np.linalg.norm(left.entries @ analysis.entries - np.eye(H.space.dim), ord=2))
    if residual > tol:
        raise InclusionFailureError(
            "Analysis map is not injective; no reconstruction operator", residual=residual, tol=tol
        )
    return left
