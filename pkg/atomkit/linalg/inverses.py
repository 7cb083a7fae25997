"""
Moore-Penrose and complement-parameterized generalized inverses.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from ..config import RANK_RTOL
from ..errors import ComplementMismatchError, DimensionMismatchError
from ..models.reports import CheckReport, CheckResult
from .spaces import LinearMap, spectral_norm
from .subspaces import numerical_rank

logger = logging.getLogger(__name__)

IDEMPOTENCE_TOL = 1e-10
IDENTITY_TOL = 1e-9


def _scale(*arrays: np.ndarray) -> float:
    return max([1.0] + [spectral_norm(a) for a in arrays])


def idempotence_residual(entries: np.ndarray) -> float:
    return spectral_norm(entries @ entries - entries) / _scale(entries)


@dataclass(frozen=True)
class ComplementPair:
    """P projects onto ker A (on the domain), Q onto Range A (on the codomain)."""

    P: LinearMap
    Q: LinearMap

    def __post_init__(self):
        for name, proj in (("P", self.P), ("Q", self.Q)):
            if proj.shape[0] != proj.shape[1]:
                raise DimensionMismatchError(
                    f"{name} must be square", expected="square", actual=list(proj.shape)
                )
            residual = idempotence_residual(proj.entries)
            if residual > IDEMPOTENCE_TOL:
                raise ComplementMismatchError(f"{name}∘{name} = {name}", residual)

    @classmethod
    def orthogonal(cls, A: LinearMap, tol: float = RANK_RTOL) -> "ComplementPair":
        """Orthogonal projections onto ker A and Range A (the Moore-Penrose choice)."""
        G = moore_penrose(A, tol).entries
        n, m = A.domain.dim, A.codomain.dim
        P = np.eye(n) - G @ A.entries
        Q = A.entries @ G
        return cls(
            LinearMap(A.domain, A.domain, P),
            LinearMap(A.codomain, A.codomain, Q),
        )


def moore_penrose(A: LinearMap, tol: float = RANK_RTOL) -> LinearMap:
    """Moore-Penrose inverse; singular values below tol * sigma_max count as zero."""
    entries = A.entries
    if not np.any(entries):
        G = np.zeros(entries.T.shape)
    else:
        G = scipy.linalg.pinv(entries, atol=0.0, rtol=tol)
    return LinearMap(A.codomain, A.domain, G)


def _complement_checks(A: LinearMap, pair: ComplementPair, tol: float, rtol: float) -> None:
    a, P, Q = A.entries, pair.P.entries, pair.Q.entries
    n, m = A.domain.dim, A.codomain.dim
    if P.shape != (n, n) or Q.shape != (m, m):
        raise DimensionMismatchError(
            "Complement pair does not conform to the operator",
            expected=[[n, n], [m, m]],
            actual=[list(P.shape), list(Q.shape)],
        )
    rank_a = numerical_rank(a, rtol)
    scale = _scale(a)

    residual = spectral_norm(a @ P) / scale
    if residual > tol:
        raise ComplementMismatchError("A∘P = 0", residual, "P does not map into ker A")
    if numerical_rank(P, rtol) != n - rank_a:
        raise ComplementMismatchError(
            "rank P = dim ker A",
            float(abs(numerical_rank(P, rtol) - (n - rank_a))),
            "Range P is smaller than ker A",
        )
    residual = spectral_norm(Q @ a - a) / scale
    if residual > tol:
        raise ComplementMismatchError("Q∘A = A", residual, "Range A is not fixed by Q")
    if numerical_rank(Q, rtol) != rank_a:
        raise ComplementMismatchError(
            "rank Q = rank A",
            float(abs(numerical_rank(Q, rtol) - rank_a)),
            "Range Q is larger than Range A",
        )


def generalized_inverse(
    A: LinearMap,
    complements: ComplementPair,
    tol: float = IDENTITY_TOL,
    rtol: float = RANK_RTOL,
) -> LinearMap:
    """
    The generalized inverse G with G A = I - P and A G = Q.

    G inverts A from Range(I - P) onto Range Q and vanishes on Range(I - Q).

    Raises:
        ComplementMismatchError: the pair does not match ker A / Range A,
            or one of the four identities fails after construction
    """
    _complement_checks(A, complements, tol, rtol)
    a = A.entries
    n = A.domain.dim
    P, Q = complements.P.entries, complements.Q.entries
    G = (np.eye(n) - P) @ moore_penrose(A, rtol).entries @ Q

    scale = _scale(a, G)
    identities = {
        "AGA = A": a @ G @ a - a,
        "GAG = G": G @ a @ G - G,
        "GA = I - P": G @ a - (np.eye(n) - P),
        "AG = Q": a @ G - Q,
    }
    for identity, diff in identities.items():
        residual = spectral_norm(diff) / scale**2
        if residual > tol:
            raise ComplementMismatchError(identity, residual)
    return LinearMap(A.codomain, A.domain, G)


def projection_checks(
    T: LinearMap,
    S: Optional[LinearMap] = None,
    tol: float = IDEMPOTENCE_TOL,
    rtol: float = RANK_RTOL,
) -> CheckReport:
    """TS and ST are idempotent with rank(TS) = rank T and rank(ST) = rank S."""
    if S is None:
        S = moore_penrose(T, rtol)
    t, s = T.entries, S.entries
    if s.shape != t.T.shape:
        raise DimensionMismatchError(
            "S must map the codomain of T back to its domain",
            expected=list(t.T.shape),
            actual=list(s.shape),
        )
    ts, st = t @ s, s @ t
    scale = _scale(t, s)
    checks = [
        CheckResult.within("TST = T", spectral_norm(t @ s @ t - t) / scale**2, tol),
        CheckResult.within("STS = S", spectral_norm(s @ t @ s - s) / scale**2, tol),
        CheckResult.within("TS idempotent", idempotence_residual(ts), tol),
        CheckResult.within("ST idempotent", idempotence_residual(st), tol),
        CheckResult.within(
            "rank TS = rank T", abs(numerical_rank(ts, rtol) - numerical_rank(t, rtol)), 0
        ),
        CheckResult.within(
            "rank ST = rank S", abs(numerical_rank(st, rtol) - numerical_rank(s, rtol)), 0
        ),
    ]
    return CheckReport(name="projection_checks", checks=checks)
