"""
Operator-norm and lower-bound estimation between coordinate l^p spaces.

Exact values are returned where a closed formula exists: (2,2) via the
SVD, p_in = 1 via column norms, p_out = inf via row norms. Every other
pair gets a certified sandwich: the lower end is a ratio actually
attained by some vector, the upper end a provable inequality.
"""
import logging
import math
from typing import Callable, Iterable, List, Optional

import numpy as np
import scipy.linalg
import scipy.optimize

from ..config import RANK_RTOL, settings
from ..models.estimates import EXACT_RTOL, BoundEstimate, BoundMethod
from .spaces import INF, Exponent, LinearMap, conjugate_exponent, spectral_norm
from .subspaces import numerical_rank

logger = logging.getLogger(__name__)


def _sandwich(lower: float, upper: float, method: BoundMethod) -> BoundEstimate:
    upper = max(float(upper), 0.0)
    lower = min(max(float(lower), 0.0), upper)
    exact = upper - lower <= EXACT_RTOL * max(1.0, upper)
    if exact:
        lower = upper
    return BoundEstimate(lower=lower, upper=upper, exact=exact, method=method)


def _lp_norms(arr: np.ndarray, p: Exponent, axis: int) -> np.ndarray:
    return np.linalg.norm(arr, ord=p, axis=axis)


def max_column_norm(entries: np.ndarray, q: Exponent) -> float:
    """||A||_{1->q}."""
    if entries.size == 0:
        return 0.0
    return float(np.max(_lp_norms(entries, q, axis=0)))


def max_row_norm(entries: np.ndarray, p: Exponent) -> float:
    """||A||_{p->inf}: largest l^{p'} norm of a row."""
    if entries.size == 0:
        return 0.0
    return float(np.max(_lp_norms(entries, conjugate_exponent(p), axis=1)))


def _duality_map(v: np.ndarray, r: Exponent) -> np.ndarray:
    """z with ||z||_{r'} = 1 and <z, v> = ||v||_r (zero for v = 0)."""
    nv = np.linalg.norm(v, ord=r)
    if nv == 0:
        return np.zeros_like(v)
    if r == 1:
        return np.sign(v)
    if r == INF:
        z = np.zeros_like(v)
        k = int(np.argmax(np.abs(v)))
        z[k] = np.sign(v[k])
        return z
    return np.sign(v) * np.abs(v / nv) ** (r - 1)


def _ratio(entries: np.ndarray, x: np.ndarray, p: Exponent, q: Exponent) -> float:
    nx = np.linalg.norm(x, ord=p)
    if nx == 0:
        return 0.0
    return float(np.linalg.norm(entries @ x, ord=q) / nx)


def _start_vectors(entries: np.ndarray, samples: int, rng: np.random.Generator) -> Iterable[np.ndarray]:
    n = entries.shape[1]
    yield from np.eye(n)
    if np.any(entries):
        _, _, vt = np.linalg.svd(entries)
        yield from vt
    yield np.ones(n)
    for _ in range(samples):
        yield rng.standard_normal(n)


def _power_lower(
    entries: np.ndarray, p: Exponent, q: Exponent, samples: int, iterations: int, seed: int
) -> float:
    """Best attained ratio over starts refined by the alternating duality-map iteration."""
    rng = np.random.default_rng(seed)
    p_dual = conjugate_exponent(p)
    best = 0.0
    for x in _start_vectors(entries, samples, rng):
        current = _ratio(entries, x, p, q)
        for _ in range(iterations):
            x_new = _duality_map(entries.T @ _duality_map(entries @ x, q), p_dual)
            if not np.any(x_new):
                break
            ratio = _ratio(entries, x_new, p, q)
            # the iteration is monotone; stop once it stalls
            if ratio <= current * (1 + 1e-14):
                current = max(current, ratio)
                break
            x, current = x_new, ratio
        best = max(best, current)
    return best


def _upper_candidates(entries: np.ndarray, p: Exponent, q: Exponent) -> List[float]:
    m, n = entries.shape
    inv_q = 0.0 if q == INF else 1.0 / q
    inv_p = 0.0 if p == INF else 1.0 / p
    candidates = [
        # ||y||_q <= m^{1/q} ||y||_inf
        max_row_norm(entries, p) * m**inv_q,
        # ||x||_1 <= n^{1 - 1/p} ||x||_p
        max_column_norm(entries, q) * n ** (1.0 - inv_p),
        # through l^2 on both sides
        spectral_norm(entries) * n ** max(0.0, 0.5 - inv_p) * m ** max(0.0, inv_q - 0.5),
    ]
    if p == q:
        # Riesz-Thorin between (1,1) and (inf,inf)
        candidates.append(
            max_column_norm(entries, 1.0) ** inv_p * max_row_norm(entries, INF) ** (1.0 - inv_p)
        )
    return candidates


def operator_norm(
    A: LinearMap,
    samples: Optional[int] = None,
    iterations: Optional[int] = None,
    seed: int = 0,
) -> BoundEstimate:
    """Sandwich on ||A|| from (domain, p_in) to (codomain, p_out)."""
    p, q = A.domain.p, A.codomain.p
    entries = A.entries

    if p == 2 and q == 2:
        return BoundEstimate.exactly(spectral_norm(entries), BoundMethod.SVD)
    if p == 1:
        return BoundEstimate.exactly(max_column_norm(entries, q), BoundMethod.COLUMN_FORMULA)
    if q == INF:
        return BoundEstimate.exactly(max_row_norm(entries, p), BoundMethod.ROW_FORMULA)
    if not np.any(entries):
        return BoundEstimate.exactly(0.0, BoundMethod.SAMPLE_POWER_ITERATION)

    upper = min(_upper_candidates(entries, p, q))
    lower = _power_lower(
        entries,
        p,
        q,
        samples if samples is not None else settings.NORM_SAMPLES,
        iterations if iterations is not None else settings.POWER_ITERATIONS,
        seed,
    )
    logger.debug(
        "operator norm sandwich",
        extra={"operation": "operator_norm", "residual": upper - lower},
    )
    return _sandwich(lower, upper, BoundMethod.SAMPLE_POWER_ITERATION)


def sampled_infimum(
    ratio: Callable[[np.ndarray], float],
    anchor: np.ndarray,
    p: Exponent,
    samples: int,
    seed: int,
) -> float:
    """
    Smallest attained value of a homogeneous ratio over starting vectors,
    polished by Nelder-Mead. Every evaluated point is a valid upper bound
    on the infimum.

    Args:
        ratio: x -> ||Ax|| / ||x|| style objective, scale invariant
        anchor: matrix whose basis and singular vectors seed the search
        p: domain exponent used to skip zero starts
    """
    rng = np.random.default_rng(seed)
    best_x, best = None, math.inf
    for x in _start_vectors(anchor, samples, rng):
        if np.linalg.norm(x, ord=p) == 0:
            continue
        r = ratio(x)
        if r < best:
            best_x, best = x, r
    dim = anchor.shape[1]
    if best_x is not None and best > 0 and dim > 1:
        result = scipy.optimize.minimize(
            ratio,
            best_x / np.linalg.norm(best_x, ord=p),
            method="Nelder-Mead",
            options={"maxiter": 200 * dim, "xatol": 1e-12, "fatol": 1e-14},
        )
        if np.linalg.norm(result.x, ord=p) > 0:
            best = min(best, ratio(result.x))
    return best


def lower_homogeneous_bound(
    A: LinearMap,
    samples: Optional[int] = None,
    seed: int = 0,
    rtol: float = RANK_RTOL,
) -> BoundEstimate:
    """Sandwich on inf_{||x|| = 1} ||Ax||."""
    p, q = A.domain.p, A.codomain.p
    entries = A.entries
    m, n = entries.shape

    if numerical_rank(entries, rtol) < n:
        # a kernel vector attains 0
        return BoundEstimate.exactly(0.0, BoundMethod.SVD)
    if p == 2 and q == 2:
        return BoundEstimate.exactly(float(scipy.linalg.svdvals(entries)[-1]), BoundMethod.SVD)

    samples = samples if samples is not None else settings.NORM_SAMPLES
    sigma_min = float(scipy.linalg.svdvals(entries)[-1])
    inv_p = 0.0 if p == INF else 1.0 / p
    inv_q = 0.0 if q == INF else 1.0 / q
    # ||Ax||_q >= m^{min(0,1/q-1/2)} ||Ax||_2 >= .. sigma_min n^{min(0,1/2-1/p)} ||x||_p
    equivalence = sigma_min * m ** min(0.0, inv_q - 0.5) * n ** min(0.0, 0.5 - inv_p)

    # any left inverse L gives ||x||_p <= ||L||_{q->p} ||Ax||_q
    left = LinearMap(A.codomain, A.domain, np.linalg.pinv(entries))
    left_norm = operator_norm(left, samples=samples, seed=seed)
    lower = max(equivalence, 1.0 / left_norm.upper if left_norm.upper > 0 else 0.0)

    sampled = sampled_infimum(lambda x: _ratio(entries, x, p, q), entries, p, samples, seed)
    if m == n and left_norm.lower > 0:
        # square and invertible: the infimum is exactly 1/||A^{-1}||
        upper = min(sampled, 1.0 / left_norm.lower)
        if left_norm.exact:
            return BoundEstimate.exactly(upper, left_norm.method)
    else:
        upper = sampled
    return _sandwich(lower, max(upper, lower), BoundMethod.SAMPLE_POWER_ITERATION)
