"""
Coordinate l^p spaces and dense linear maps between them.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Annotated, Union

import numpy as np
from pydantic import BeforeValidator, PlainSerializer

from ..errors import DimensionMismatchError, ValidationAtomkitError

INF = math.inf

Exponent = float


def parse_exponent(value: Union[str, float, int]) -> Exponent:
    """Accept 1..inf as a number or the string "inf"."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "∞"):
            return INF
        try:
            value = float(text)
        except ValueError:
            raise ValidationAtomkitError(f"Not a norm exponent: {value!r}")
    p = float(value)
    if math.isnan(p) or p < 1:
        raise ValidationAtomkitError(f"Norm exponent must lie in [1, inf], got {value!r}")
    return p


def conjugate_exponent(p: Exponent) -> Exponent:
    """Hoelder conjugate p' with 1/p + 1/p' = 1; 1 <-> inf exactly."""
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    # rational round-trip keeps conj(conj(p)) == p bit-for-bit
    r = Fraction(p).limit_denominator(10**9)
    return float(r / (r - 1))


def format_exponent(p: Exponent) -> Union[str, float]:
    return "inf" if p == INF else p


@dataclass(frozen=True)
class PNormSpace:
    """R^dim with the l^p norm."""

    dim: int
    p: Exponent = 2.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValidationAtomkitError(f"Space dimension must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", parse_exponent(self.p))

    def dual(self) -> "PNormSpace":
        return PNormSpace(self.dim, conjugate_exponent(self.p))

    @property
    def is_hilbert(self) -> bool:
        return self.p == 2

    def norm(self, v) -> float:
        return vector_norm(self, v)

    def __str__(self) -> str:
        return f"l^{format_exponent(self.p)}({self.dim})"


def vector_norm(space: PNormSpace, v) -> float:
    """l^p norm of a coordinate vector of length space.dim."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] != space.dim:
        raise DimensionMismatchError(
            f"Vector of shape {v.shape} does not live in {space}",
            expected=space.dim,
            actual=list(v.shape),
        )
    return float(np.linalg.norm(v, ord=space.p))


def _frozen(entries) -> np.ndarray:
    arr = np.array(entries, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Dense real matrix of shape (codomain.dim, domain.dim)."""

    domain: PNormSpace
    codomain: PNormSpace
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _frozen(self.entries)
        if arr.ndim != 2 or arr.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatchError(
                f"Matrix of shape {arr.shape} does not map {self.domain} to {self.codomain}",
                expected=[self.codomain.dim, self.domain.dim],
                actual=list(arr.shape),
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationAtomkitError("Matrix entries must be finite")
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_matrix(cls, entries, p_in: Exponent = 2.0, p_out: Exponent = 2.0) -> "LinearMap":
        arr = np.atleast_2d(np.asarray(entries, dtype=float))
        rows, cols = arr.shape
        return cls(PNormSpace(cols, p_in), PNormSpace(rows, p_out), arr)

    @classmethod
    def identity(cls, space: PNormSpace) -> "LinearMap":
        return cls(space, space, np.eye(space.dim))

    @classmethod
    def zero(cls, domain: PNormSpace, codomain: PNormSpace) -> "LinearMap":
        return cls(domain, codomain, np.zeros((codomain.dim, domain.dim)))

    @property
    def shape(self):
        return self.entries.shape

    def apply(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.domain.dim:
            raise DimensionMismatchError(
                f"Cannot apply a map on {self.domain} to a vector of length {v.shape[0]}",
                expected=self.domain.dim,
                actual=v.shape[0],
            )
        return self.entries @ v

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self ∘ other."""
        return compose(self, other)

    def adjoint(self) -> "LinearMap":
        return adjoint(self)

    def with_spaces(self, domain: PNormSpace, codomain: PNormSpace) -> "LinearMap":
        return LinearMap(domain, codomain, self.entries)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return compose(self, other)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        _require_same_shape(self, other)
        return LinearMap(self.domain, self.codomain, self.entries - other.entries)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        _require_same_shape(self, other)
        return LinearMap(self.domain, self.codomain, self.entries + other.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None


def _require_same_shape(a: LinearMap, b: LinearMap) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError("Operands must have the same shape", expected=list(a.shape), actual=list(b.shape))


def compose(a: LinearMap, b: LinearMap) -> LinearMap:
    """a ∘ b, defined when b.codomain.dim == a.domain.dim."""
    if b.codomain.dim != a.domain.dim:
        raise DimensionMismatchError(
            f"Cannot compose {a.domain}->{a.codomain} after {b.domain}->{b.codomain}",
            expected=a.domain.dim,
            actual=b.codomain.dim,
        )
    return LinearMap(b.domain, a.codomain, a.entries @ b.entries)


def adjoint(a: LinearMap) -> LinearMap:
    """Transpose, acting from codomain* to domain*."""
    return LinearMap(a.codomain.dual(), a.domain.dual(), a.entries.T)


def spectral_norm(entries: np.ndarray) -> float:
    """Largest singular value; 0 for empty or zero matrices."""
    arr = np.asarray(entries, dtype=float)
    if arr.size == 0:
        return 0.0
    return float(np.linalg.norm(arr, ord=2))


def _exponent_before(value):
    try:
        return parse_exponent(value)
    except ValidationAtomkitError as exc:
        raise ValueError(exc.message) from exc


# exponent field for pydantic models: accepts "inf", serializes inf as "inf"
ExponentValue = Annotated[float, BeforeValidator(_exponent_before), PlainSerializer(format_exponent)]
