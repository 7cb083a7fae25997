"""
Finite vector families {x_n} and built-in generators.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import DimensionMismatchError, ValidationAtomkitError
from ..linalg.spaces import INF, Exponent, PNormSpace, parse_exponent


@dataclass(frozen=True, eq=False)
class VectorFamily:
    """Atoms x_1..x_M of a space, stored as the columns of a (dim, M) matrix."""

    space: PNormSpace
    atoms: np.ndarray
    q: Exponent = 2.0

    def __post_init__(self):
        arr = np.array(self.atoms, dtype=float, copy=True)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise ValidationAtomkitError("A vector family needs at least one atom")
        if arr.shape[0] != self.space.dim:
            raise DimensionMismatchError(
                f"Atoms must live in {self.space}", expected=self.space.dim, actual=arr.shape[0]
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationAtomkitError("Atom coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "atoms", arr)
        object.__setattr__(self, "q", parse_exponent(self.q))

    @classmethod
    def from_vectors(cls, vectors, p: Union[str, float] = 2.0, q: Union[str, float] = 2.0) -> "VectorFamily":
        """Build from a list of M vectors, each of the same length."""
        arr = np.atleast_2d(np.asarray(vectors, dtype=float))
        return cls(PNormSpace(arr.shape[1], p), arr.T, q)

    @property
    def M(self) -> int:
        return self.atoms.shape[1]

    def atom(self, n: int) -> np.ndarray:
        """x_n, 1-based."""
        return self.atoms[:, n - 1]

    def leading(self, m: int) -> "VectorFamily":
        """x_1..x_m."""
        if not 1 <= m <= self.M:
            raise DimensionMismatchError("Cannot take that many leading atoms", expected=self.M, actual=m)
        return VectorFamily(self.space, self.atoms[:, :m], self.q)

    def scaled(self, c: float) -> "VectorFamily":
        return VectorFamily(self.space, c * self.atoms, self.q)

    def mapped(self, operator: np.ndarray) -> "VectorFamily":
        """{L x_n} for a map L on the space."""
        return VectorFamily(self.space, np.asarray(operator, dtype=float) @ self.atoms, self.q)


def standard_basis(d: int, p: Union[str, float] = 2.0, q: Union[str, float] = 2.0) -> VectorFamily:
    return VectorFamily(PNormSpace(d, p), np.eye(d), q)


def shift_family(d: int) -> VectorFamily:
    """
    x_n = e_{n+1}, n = 1..d-1, in (R^d, l^1) with l^1 coefficients.

    Its dual side lives in l^inf on both ends; the family is Bessel with
    bound 1 while its synthesis operator misses e_1.
    """
    if d < 2:
        raise ValidationAtomkitError("The shift family needs d >= 2", {"d": d})
    return VectorFamily(PNormSpace(d, 1.0), np.eye(d)[:, 1:], 1.0)


def mercedes_benz() -> VectorFamily:
    """Three unit vectors of R^2 at 120 degrees."""
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    return VectorFamily(PNormSpace(2), np.vstack([np.cos(angles), np.sin(angles)]), 2.0)


__all__ = ["INF", "VectorFamily", "mercedes_benz", "shift_family", "standard_basis"]
