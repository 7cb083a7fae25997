"""
Triangular schemes, functional families and arrays modelling X_d.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..errors import DimensionMismatchError, ValidationAtomkitError
from ..linalg.spaces import INF, ExponentValue, PNormSpace


class NormMode(str, Enum):
    FLAT = "flat"
    ROW_SUP = "row-sup"


class SequenceNormConfig(BaseModel):
    """Concrete BK-norm on triangular arrays: l^q of everything, or sup of row l^q norms."""

    model_config = ConfigDict(frozen=True)

    q: ExponentValue = 2.0
    mode: NormMode = NormMode.ROW_SUP


@dataclass(frozen=True)
class TriangularScheme:
    """Nondecreasing level sizes m_1 <= ... <= m_N."""

    level_sizes: Tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(m) for m in self.level_sizes)
        if not sizes:
            raise ValidationAtomkitError("A triangular scheme needs at least one level")
        if any(m < 1 for m in sizes):
            raise ValidationAtomkitError("Level sizes must be positive", {"level_sizes": list(sizes)})
        if any(b < a for a, b in zip(sizes, sizes[1:])):
            raise ValidationAtomkitError("Level sizes must be nondecreasing", {"level_sizes": list(sizes)})
        object.__setattr__(self, "level_sizes", sizes)

    @classmethod
    def classical(cls, count: int) -> "TriangularScheme":
        return cls(tuple(range(1, count + 1)))

    @property
    def N(self) -> int:
        return len(self.level_sizes)

    @property
    def final_size(self) -> int:
        return self.level_sizes[-1]

    @property
    def total(self) -> int:
        return sum(self.level_sizes)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TriangularFunctionalFamily:
    """Per-level functionals h_{n,i} in X*; row n is an (m_n, dim) matrix."""

    scheme: TriangularScheme
    space: PNormSpace
    rows: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.rows) != self.scheme.N:
            raise DimensionMismatchError(
                "One row of functionals per level is required",
                expected=self.scheme.N,
                actual=len(self.rows),
            )
        rows = []
        for n, (m_n, row) in enumerate(zip(self.scheme.level_sizes, self.rows), start=1):
            arr = np.atleast_2d(np.asarray(row, dtype=float))
            if arr.shape != (m_n, self.space.dim):
                raise DimensionMismatchError(
                    f"Level {n} must hold {m_n} functionals of dimension {self.space.dim}",
                    expected=[m_n, self.space.dim],
                    actual=list(arr.shape),
                )
            rows.append(_readonly(arr))
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def from_rows(cls, space: PNormSpace, rows: Sequence) -> "TriangularFunctionalFamily":
        arrays = [np.atleast_2d(np.asarray(row, dtype=float)) for row in rows]
        return cls(TriangularScheme(tuple(a.shape[0] for a in arrays)), space, tuple(arrays))

    @classmethod
    def single_level(cls, space: PNormSpace, functionals) -> "TriangularFunctionalFamily":
        return cls.from_rows(space, [functionals])

    def stacked_matrix(self) -> np.ndarray:
        """All functionals level after level; shape (sum m_n, dim)."""
        return np.vstack(self.rows)

    def limit_matrix(self) -> np.ndarray:
        """Final-level functionals h_{N,1..m_N}; the map that synthesis consumes."""
        return self.rows[-1]

    def level_matrix(self, n: int) -> np.ndarray:
        """Row n, 1-based."""
        return self.rows[n - 1]

    def pushed(self, operator: np.ndarray) -> "TriangularFunctionalFamily":
        """Functionals h ∘ L for a map L on the space, i.e. L*(h_{n,i})."""
        return TriangularFunctionalFamily(
            self.scheme, self.space, tuple(row @ operator for row in self.rows)
        )


@dataclass(frozen=True, eq=False)
class TriangularArray:
    """Per-level values c_{n,i}."""

    scheme: TriangularScheme
    values: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.values) != self.scheme.N:
            raise DimensionMismatchError(
                "One row of values per level is required", expected=self.scheme.N, actual=len(self.values)
            )
        values = []
        for n, (m_n, row) in enumerate(zip(self.scheme.level_sizes, self.values), start=1):
            arr = np.asarray(row, dtype=float).reshape(-1)
            if arr.shape[0] != m_n:
                raise DimensionMismatchError(
                    f"Level {n} must hold {m_n} values", expected=m_n, actual=arr.shape[0]
                )
            values.append(_readonly(arr))
        object.__setattr__(self, "values", tuple(values))

    @classmethod
    def from_rows(cls, rows: Sequence) -> "TriangularArray":
        arrays = [np.asarray(row, dtype=float).reshape(-1) for row in rows]
        return cls(TriangularScheme(tuple(a.shape[0] for a in arrays)), tuple(arrays))

    def flat(self) -> np.ndarray:
        return np.concatenate(self.values)

    def tolist(self):
        return [row.tolist() for row in self.values]


__all__ = [
    "INF",
    "NormMode",
    "SequenceNormConfig",
    "TriangularArray",
    "TriangularFunctionalFamily",
    "TriangularScheme",
]
