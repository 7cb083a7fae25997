"""
Rank, range and kernel computations with a relative singular-value cutoff.
"""
import numpy as np
import scipy.linalg

from ..config import RANK_RTOL


def _cutoff(s: np.ndarray, rtol: float) -> float:
    return rtol * s[0] if s.size and s[0] > 0 else 0.0


def numerical_rank(entries, rtol: float = RANK_RTOL) -> int:
    arr = np.asarray(entries, dtype=float)
    if arr.size == 0:
        return 0
    s = scipy.linalg.svdvals(arr)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > _cutoff(s, rtol)))


def range_basis(entries, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal columns spanning Range(A); shape (rows, rank)."""
    arr = np.asarray(entries, dtype=float)
    if arr.size == 0 or not np.any(arr):
        return np.zeros((arr.shape[0], 0))
    return scipy.linalg.orth(arr, rcond=rtol)


def kernel_basis(entries, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal columns spanning ker(A); shape (cols, cols - rank)."""
    arr = np.asarray(entries, dtype=float)
    if not np.any(arr):
        return np.eye(arr.shape[1])
    return scipy.linalg.null_space(arr, rcond=rtol)


def min_principal_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Smallest principal angle between column spans; pi/2 if either is trivial."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return float(np.pi / 2)
    return float(np.min(scipy.linalg.subspace_angles(a, b)))
