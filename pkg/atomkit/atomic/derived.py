"""
Derived families behind the two constructions and the identities they satisfy.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import RANK_RTOL
from ..linalg.inverses import moore_penrose
from ..linalg.spaces import LinearMap, spectral_norm


@dataclass(frozen=True, eq=False)
class DerivedFamilies:
    """Two derived families as row/column stacks, plus the identity residual."""

    first: np.ndarray
    second: np.ndarray
    residual: float


def e3_derived_families(
    T: LinearMap, K: LinearMap, W: Optional[LinearMap] = None, rtol: float = RANK_RTOL
) -> DerivedFamilies:
    """
    f_n = (T^+)*(e_n*), g_n = W*(e_n*) as rows, with the residual of
    h_n = K* f_n + g_n - sum_i f_n(x_i) g_i against h_n = S*(e_n*).
    """
    t, k = T.entries, K.entries
    t_pinv = moore_penrose(T, rtol).entries
    w = np.zeros(t.T.shape) if W is None else W.entries
    f, g = t_pinv, w
    # f_n(x_i) is entry (n, i) of f T
    expansion = f @ k + g - (f @ t) @ g
    s = t_pinv @ k + w - t_pinv @ t @ w
    return DerivedFamilies(first=f, second=g, residual=spectral_norm(expansion - s))


def e4_derived_families(
    S: LinearMap, K: LinearMap, W: Optional[LinearMap] = None, rtol: float = RANK_RTOL
) -> DerivedFamilies:
    """
    y_n = S^+(e_n), l_n = W(e_n) as columns, with the residual of
    x_n = K y_n + l_n - sum_i h_i(y_n) l_i against x_n = T(e_n).
    """
    s, k = S.entries, K.entries
    s_pinv = moore_penrose(S, rtol).entries
    w = np.zeros(s.T.shape) if W is None else W.entries
    y, l = s_pinv, w
    # h_i(y_n) is entry (i, n) of S y
    expansion = k @ y + l - l @ (s @ y)
    t = k @ s_pinv + w @ (np.eye(s.shape[0]) - s @ s_pinv)
    return DerivedFamilies(first=y, second=l, residual=spectral_norm(expansion - t))
