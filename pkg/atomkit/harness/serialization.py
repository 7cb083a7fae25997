"""
JSON documents for spaces, maps, families, certificates and scenario inputs.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from ..errors import AtomkitError, SchemaError
from ..frames.family import VectorFamily
from ..linalg.inverses import ComplementPair
from ..linalg.spaces import LinearMap, PNormSpace
from ..models.reports import Certificate
from ..models.schemas import (
    ComplementPairSchema,
    Document,
    FunctionalFamilySchema,
    InstanceSpec,
    MapSchema,
    NormSchema,
    ScenarioInput,
    SpaceSchema,
    SuiteConfig,
    SuiteReport,
    VectorFamilySchema,
)
from ..seqspace.scheme import NormMode, SequenceNormConfig, TriangularFunctionalFamily
from .generators import ScenarioInstance

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def space_to_schema(space: PNormSpace) -> SpaceSchema:
    return SpaceSchema(dim=space.dim, p=space.p)


def space_from_schema(doc: SpaceSchema) -> PNormSpace:
    return PNormSpace(doc.dim, doc.p)


def map_to_schema(A: LinearMap) -> MapSchema:
    return MapSchema(
        domain=space_to_schema(A.domain),
        codomain=space_to_schema(A.codomain),
        entries=A.entries.tolist(),
    )


def map_from_schema(doc: MapSchema) -> LinearMap:
    entries = np.array(doc.entries, dtype=float).reshape(doc.codomain.dim, doc.domain.dim)
    return LinearMap(space_from_schema(doc.domain), space_from_schema(doc.codomain), entries)


def family_to_schema(F: VectorFamily) -> VectorFamilySchema:
    return VectorFamilySchema(space=space_to_schema(F.space), atoms=F.atoms.T.tolist(), q=F.q)


def family_from_schema(doc: VectorFamilySchema) -> VectorFamily:
    return VectorFamily(space_from_schema(doc.space), np.array(doc.atoms, dtype=float).T, doc.q)


def functionals_to_schema(H: TriangularFunctionalFamily) -> FunctionalFamilySchema:
    return FunctionalFamilySchema(space=space_to_schema(H.space), rows=[row.tolist() for row in H.rows])


def functionals_from_schema(doc: FunctionalFamilySchema) -> TriangularFunctionalFamily:
    space = space_from_schema(doc.space)
    rows = [np.array(row, dtype=float).reshape(len(row), space.dim) for row in doc.rows]
    return TriangularFunctionalFamily.from_rows(space, rows)


def instance_to_schema(instance: ScenarioInstance) -> ScenarioInput:
    return ScenarioInput(
        scenario=instance.scenario,
        seed=instance.seed,
        family=family_to_schema(instance.family) if instance.family is not None else None,
        functionals=functionals_to_schema(instance.H) if instance.H is not None else None,
        K=map_to_schema(instance.K) if instance.K is not None else None,
        W=map_to_schema(instance.W) if instance.W is not None else None,
        P=map_to_schema(instance.P) if instance.P is not None else None,
        complements=(
            ComplementPairSchema(
                P=map_to_schema(instance.complements.P), Q=map_to_schema(instance.complements.Q)
            )
            if instance.complements is not None
            else None
        ),
        norm=NormSchema(q=instance.cfg.q, mode=instance.cfg.mode.value),
        expect_pass=instance.expect_pass,
    )


def instance_from_schema(doc: ScenarioInput) -> ScenarioInstance:
    def _opt(value, convert):
        return convert(value) if value is not None else None

    complements = None
    if doc.complements is not None:
        complements = ComplementPair(map_from_schema(doc.complements.P), map_from_schema(doc.complements.Q))
    return ScenarioInstance(
        scenario=doc.scenario,
        seed=doc.seed or 0,
        family=_opt(doc.family, family_from_schema),
        H=_opt(doc.functionals, functionals_from_schema),
        K=_opt(doc.K, map_from_schema),
        W=_opt(doc.W, map_from_schema),
        P=_opt(doc.P, map_from_schema),
        complements=complements,
        cfg=SequenceNormConfig(q=doc.norm.q, mode=NormMode(doc.norm.mode)),
        expect_pass=True if doc.expect_pass is None else doc.expect_pass,
    )


_TO_SCHEMA = [
    (PNormSpace, "space", space_to_schema),
    (LinearMap, "linear-map", map_to_schema),
    (VectorFamily, "vector-family", family_to_schema),
    (TriangularFunctionalFamily, "functional-family", functionals_to_schema),
    (ScenarioInstance, "scenario-input", instance_to_schema),
    (Certificate, "certificate", lambda c: c),
    (InstanceSpec, "instance-spec", lambda s: s),
    (SuiteConfig, "suite-config", lambda s: s),
    (SuiteReport, "suite-report", lambda r: r),
]

_FROM_SCHEMA = {
    "space": (SpaceSchema, space_from_schema),
    "linear-map": (MapSchema, map_from_schema),
    "vector-family": (VectorFamilySchema, family_from_schema),
    "functional-family": (FunctionalFamilySchema, functionals_from_schema),
    "scenario-input": (ScenarioInput, instance_from_schema),
    "certificate": (Certificate, lambda c: c),
    "instance-spec": (InstanceSpec, lambda s: s),
    "suite-config": (SuiteConfig, lambda s: s),
    "suite-report": (SuiteReport, lambda r: r),
}


def to_document(value: Any) -> Dict[str, Any]:
    """Wrap a value in the versioned envelope, ready for json.dumps."""
    for cls, kind, convert in _TO_SCHEMA:
        if isinstance(value, cls):
            model: BaseModel = convert(value)
            return Document(kind=kind, data=model.model_dump(mode="json")).model_dump(mode="json")
    raise TypeError(f"No document format for {type(value).__name__}")


def from_document(document: Any, path: Optional[str] = None, expect: Optional[str] = None) -> Any:
    """
    Rebuild a value from its envelope.

    Raises:
        SchemaError: the envelope or payload violates the schema, or the
            payload is well-formed but describes inconsistent objects
    """
    try:
        envelope = Document.model_validate(document)
        if expect is not None and envelope.kind != expect:
            raise SchemaError(
                f"Expected a {expect} document, got {envelope.kind}",
                [{"field": "kind", "message": f"expected {expect}", "type": "literal_error"}],
                path,
            )
        schema, convert = _FROM_SCHEMA[envelope.kind]
        payload = schema.model_validate(envelope.data)
    except ValidationError as exc:
        raise SchemaError.from_validation_error(exc, path) from exc
    try:
        return convert(payload)
    except AtomkitError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(
            exc.message,
            [{"field": "data", "message": exc.message, "type": exc.code}],
            path,
        ) from exc


def dumps(value: Any) -> str:
    # json emits the shortest repr that round-trips each float
    return json.dumps(to_document(value), indent=2, sort_keys=False)


def loads(text: str, path: Optional[str] = None, expect: Optional[str] = None) -> Any:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"Malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            [{"field": f"line {exc.lineno}", "message": exc.msg, "type": "json_invalid"}],
            path,
        ) from exc
    return from_document(document, path, expect)


def save(value: Any, path: PathLike) -> None:
    Path(path).write_text(dumps(value) + "\n", encoding="utf-8")
    logger.debug("document written", extra={"operation": "save", "event": str(path)})


def load(path: PathLike, expect: Optional[str] = None) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"Cannot read {path}: {exc.strerror}", [], str(path)) from exc
    return loads(text, str(path), expect)
