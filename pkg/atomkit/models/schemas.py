"""
Pydantic models for the JSON document format.

Every document carries schema_version and kind; matrices are row-major
nested arrays and an infinite exponent is the string "inf".
"""
from typing import Any, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import settings
from ..linalg.spaces import ExponentValue
from .reports import Certificate

SCHEMA_VERSION = 1

Scenario = Literal[
    "e3",
    "e4",
    "converse",
    "characterize",
    "complemented",
    "shift-example",
    "embed-classical",
    "kframe",
]


class SpaceSchema(BaseModel):
    """Coordinate space R^dim with the l^p norm."""
    dim: int = Field(ge=1)
    p: ExponentValue = 2.0


class MapSchema(BaseModel):
    """Dense matrix between two spaces."""
    domain: SpaceSchema
    codomain: SpaceSchema
    entries: List[List[float]]

    @model_validator(mode="after")
    def _shape_matches_spaces(self) -> "MapSchema":
        rows = len(self.entries)
        if rows != self.codomain.dim:
            raise ValueError(f"entries has {rows} rows, codomain.dim is {self.codomain.dim}")
        for i, row in enumerate(self.entries):
            if len(row) != self.domain.dim:
                raise ValueError(f"entries row {i} has {len(row)} columns, domain.dim is {self.domain.dim}")
        return self


class VectorFamilySchema(BaseModel):
    """Atoms listed one vector per entry."""
    space: SpaceSchema
    atoms: List[List[float]] = Field(min_length=1)
    q: ExponentValue = 2.0

    @model_validator(mode="after")
    def _atoms_fit_space(self) -> "VectorFamilySchema":
        for n, atom in enumerate(self.atoms):
            if len(atom) != self.space.dim:
                raise ValueError(f"atom {n} has length {len(atom)}, space.dim is {self.space.dim}")
        return self


class FunctionalFamilySchema(BaseModel):
    """Triangular functional family; rows[n][i] is h_{n+1,i+1}."""
    space: SpaceSchema
    rows: List[List[List[float]]] = Field(min_length=1)

    @model_validator(mode="after")
    def _rows_fit_space(self) -> "FunctionalFamilySchema":
        previous = 0
        for n, row in enumerate(self.rows):
            if len(row) < max(previous, 1):
                raise ValueError(f"row {n} has {len(row)} functionals; sizes must be positive and nondecreasing")
            previous = len(row)
            for functional in row:
                if len(functional) != self.space.dim:
                    raise ValueError(f"row {n} holds a functional of length {len(functional)}, space.dim is {self.space.dim}")
        return self


class ComplementPairSchema(BaseModel):
    P: MapSchema
    Q: MapSchema


class NormSchema(BaseModel):
    q: ExponentValue = 2.0
    mode: Literal["flat", "row-sup"] = "row-sup"


class ScenarioInput(BaseModel):
    """Inputs of one scenario instance, as written by `gen` and read by the verbs."""

    model_config = ConfigDict(extra="forbid")

    scenario: Scenario
    seed: Optional[int] = None
    family: Optional[VectorFamilySchema] = None
    functionals: Optional[FunctionalFamilySchema] = None
    K: Optional[MapSchema] = None
    W: Optional[MapSchema] = None
    P: Optional[MapSchema] = None
    complements: Optional[ComplementPairSchema] = None
    norm: NormSchema = Field(default_factory=NormSchema)
    expect_pass: Optional[bool] = None


class InstanceSpec(BaseModel):
    """What `gen` is asked to build."""

    model_config = ConfigDict(extra="forbid")

    scenario: Scenario
    seed: int = Field(default=0, ge=0, lt=2**64)
    dims: Tuple[int, int, int] = (3, 5, 1)
    exponents: Tuple[ExponentValue, ExponentValue] = (2.0, 2.0)
    rank_K: Optional[int] = None
    rank_T: Optional[int] = None
    negative: bool = False


class SuiteConfig(BaseModel):
    """Suite configuration file; unset fields fall back to the ATOMKIT_ settings."""

    model_config = ConfigDict(extra="forbid")

    scenarios: List[Scenario] = Field(default_factory=list)
    instances: int = Field(default_factory=lambda: settings.INSTANCES, ge=0)
    tol: float = Field(default_factory=lambda: settings.TOL, gt=0)
    seed: int = Field(default_factory=lambda: settings.SEED, ge=0, lt=2**64)
    norm_mode: Literal["flat", "row-sup"] = Field(default_factory=lambda: settings.NORM_MODE)
    dims: Tuple[int, int, int] = (3, 5, 1)
    exponents: Tuple[ExponentValue, ExponentValue] = (2.0, 2.0)


class InstanceOutcome(BaseModel):
    """One suite instance: its certificate or the error that stopped it."""
    scenario: Scenario
    seed: int
    verdict: bool
    residual: Optional[float] = None
    certificate: Optional[Certificate] = None
    verdicts: Optional[dict] = None
    error: Optional[dict] = None


class SuiteReport(BaseModel):
    """Aggregate of a suite run; everything except wall_time is deterministic."""
    config: SuiteConfig
    outcomes: List[InstanceOutcome] = Field(default_factory=list)
    passed: int = 0
    failed: int = 0
    max_residual: dict = Field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def success(self) -> bool:
        return self.failed == 0


class Document(BaseModel):
    """Envelope around every serialized value."""
    schema_version: Literal[1] = SCHEMA_VERSION
    kind: Literal[
        "space",
        "linear-map",
        "vector-family",
        "functional-family",
        "certificate",
        "scenario-input",
        "instance-spec",
        "suite-config",
        "suite-report",
    ]
    data: Any
