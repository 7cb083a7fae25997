"""
Command-line entry point.

    atomkit verify <file>
    atomkit construct e3|e4|converse <file>
    atomkit characterize <file>
    atomkit suite <config>
    atomkit gen <spec>

Exit status: 0 every verdict passed, 1 some certificate failed, 2 toolkit
error, 3 unexpected failure.
"""
import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional

from pydantic import ValidationError

from ..atomic import (
    AtomicSystemCandidate,
    characterize_local_atoms,
    construct_from_bessel,
    construct_from_xd_bessel,
    converse_construction,
    verify_atomic_system,
)
from ..config import settings
from ..errors import (
    EXIT_CERTIFICATE_FAILED,
    EXIT_OK,
    EXIT_UNEXPECTED,
    AtomkitError,
    ConfigError,
    SchemaError,
    ValidationAtomkitError,
    error_payload,
)
from ..linalg.spaces import LinearMap
from ..logging_config import setup_logging
from ..metrics import export_metrics
from ..models.schemas import InstanceSpec, SuiteConfig
from ..observability import capture_exception, init_sentry
from ..seqspace.scheme import NormMode
from . import serialization
from .generators import ScenarioInstance, generate
from .suite import run_suite

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help=f"Absolute tolerance (default {settings.TOL:g}).")
    common.add_argument(
        "--seed", type=int, default=None, help=f"Seed for sampling and generation (default {settings.SEED})."
    )
    common.add_argument("--norm-mode", choices=["flat", "row-sup"], default=None, help="X_d norm mode.")
    common.add_argument("--json-out", default=None, help="Write the result document to this path.")
    common.add_argument("--metrics-out", default=None, help="Write prometheus metrics to this text file.")
    common.add_argument("--quiet", action="store_true", default=None, help="Only warnings and errors on stderr.")

    parser = argparse.ArgumentParser(
        prog="atomkit",
        description="Verify, construct and stress-test approximative atomic systems.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    verify = verbs.add_parser("verify", parents=[common], help="Verify the atomic system in a scenario input.")
    verify.add_argument("file")

    construct = verbs.add_parser("construct", parents=[common], help="Construct an atomic system for K.")
    construct.add_argument("method", choices=["e3", "e4", "converse"])
    construct.add_argument("file")

    characterize = verbs.add_parser(
        "characterize", parents=[common], help="Three-way local atoms characterization for Range P."
    )
    characterize.add_argument("file")

    suite = verbs.add_parser("suite", parents=[common], help="Run the theorem suite from a config file.")
    suite.add_argument("config")
    suite.add_argument(
        "--instances", type=int, default=None, help=f"Instances per scenario (default {settings.INSTANCES})."
    )
    suite.add_argument("--workers", type=int, default=None, help=f"Worker threads (default {settings.WORKERS}).")

    gen = verbs.add_parser("gen", parents=[common], help="Generate a scenario input from an instance spec.")
    gen.add_argument("spec")
    return parser


def _tol(args: argparse.Namespace) -> float:
    return args.tol if args.tol is not None else settings.TOL


def _seed(args: argparse.Namespace) -> int:
    return args.seed if args.seed is not None else settings.SEED


def _norm_mode(args: argparse.Namespace) -> Optional[str]:
    """The flag, else ATOMKIT_NORM_MODE when it was set explicitly, else None (keep the input's own mode)."""
    if args.norm_mode is not None:
        return args.norm_mode
    return settings.NORM_MODE if "NORM_MODE" in settings.model_fields_set else None


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"Cannot read {path}: {exc.strerror}", [], path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"Malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            [{"field": f"line {exc.lineno}", "message": exc.msg, "type": "json_invalid"}],
            path,
        ) from exc


def _bare_or_document(path: str, model, kind: str):
    """Accept either the enveloped document or the bare model."""
    raw = _read_json(path)
    if isinstance(raw, dict) and "schema_version" in raw:
        return serialization.from_document(raw, path, expect=kind)
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        raise SchemaError.from_validation_error(exc, path) from exc


def _emit(value: Any, json_out: Optional[str]) -> None:
    if json_out:
        serialization.save(value, json_out)
    else:
        print(serialization.dumps(value))


def _load_instance(args: argparse.Namespace) -> ScenarioInstance:
    instance = serialization.load(args.file, expect="scenario-input")
    mode = _norm_mode(args)
    if mode is not None:
        instance = dataclasses.replace(instance, cfg=instance.cfg.model_copy(update={"mode": NormMode(mode)}))
    return instance


def _require(instance: ScenarioInstance, *fields: str) -> None:
    missing = [name for name in fields if getattr(instance, name) is None]
    if missing:
        raise ValidationAtomkitError(
            f"Scenario input lacks {', '.join(missing)}", {"missing": missing, "scenario": instance.scenario}
        )


def _operator(instance: ScenarioInstance) -> LinearMap:
    space = instance.family.space if instance.family is not None else instance.H.space
    return instance.K if instance.K is not None else LinearMap.identity(space)


def cmd_verify(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    _require(instance, "family", "H")
    cand = AtomicSystemCandidate(instance.family, instance.H, _operator(instance), instance.cfg)
    certificate = verify_atomic_system(cand, _tol(args), seed=_seed(args))
    _emit(certificate, args.json_out)
    return EXIT_OK if certificate.verdict else EXIT_CERTIFICATE_FAILED


def cmd_construct(args: argparse.Namespace) -> int:
    """Construct the missing half, verify it, write the completed input and print the certificate."""
    instance = _load_instance(args)
    tol = _tol(args)
    if args.method == "e4":
        _require(instance, "H")
        K = _operator(instance)
        family = construct_from_xd_bessel(instance.H, K, instance.W, instance.cfg, tol)
        completed = dataclasses.replace(instance, family=family, K=K)
    else:
        _require(instance, "family")
        K = _operator(instance)
        if args.method == "e3":
            H = construct_from_bessel(instance.family, K, instance.W, tol)
        else:
            H = converse_construction(instance.family, K, tol)
        completed = dataclasses.replace(instance, H=H, K=K)

    cand = AtomicSystemCandidate(completed.family, completed.H, completed.K, completed.cfg)
    certificate = verify_atomic_system(cand, tol, seed=_seed(args))
    if args.json_out:
        serialization.save(completed, args.json_out)
    print(serialization.dumps(certificate))
    return EXIT_OK if certificate.verdict else EXIT_CERTIFICATE_FAILED


def cmd_characterize(args: argparse.Namespace) -> int:
    instance = _load_instance(args)
    _require(instance, "family", "P")
    report = characterize_local_atoms(instance.family, instance.H, instance.P, _tol(args), instance.cfg)
    document = report.model_dump(mode="json") | {"agree": report.agree, "verdict": report.verdict}
    text = json.dumps(document, indent=2)
    if args.json_out:
        Path(args.json_out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK if report.verdict else EXIT_CERTIFICATE_FAILED


def _suite_config(args: argparse.Namespace) -> SuiteConfig:
    try:
        config = _bare_or_document(args.config, SuiteConfig, "suite-config")
    except SchemaError as exc:
        raise ConfigError(exc.message, exc.details) from exc
    overrides = {
        "tol": args.tol,
        "seed": args.seed,
        "instances": args.instances,
        "norm_mode": args.norm_mode,
    }
    overrides = {key: value for key, value in overrides.items() if value is not None}
    try:
        return SuiteConfig.model_validate(config.model_dump() | overrides)
    except ValidationError as exc:
        raise ConfigError("Invalid suite override", {"errors": exc.errors(include_url=False)}) from exc


def cmd_suite(args: argparse.Namespace) -> int:
    config = _suite_config(args)
    report = run_suite(config, workers=args.workers)
    json_out = args.json_out or settings.JSON_OUT
    if json_out:
        serialization.save(report, json_out)
    print(f"{report.passed}/{report.passed + report.failed} instances passed in {report.wall_time:.2f}s")
    for scenario, residual in report.max_residual.items():
        print(f"  {scenario}: max residual {residual:.3e}")
    return EXIT_OK if report.success else EXIT_CERTIFICATE_FAILED


def cmd_gen(args: argparse.Namespace) -> int:
    spec = _bare_or_document(args.spec, InstanceSpec, "instance-spec")
    if args.seed is not None:
        spec = spec.model_copy(update={"seed": args.seed})
    mode = NormMode(args.norm_mode or settings.NORM_MODE)
    _emit(generate(spec, mode), args.json_out)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "construct": cmd_construct,
    "characterize": cmd_characterize,
    "suite": cmd_suite,
    "gen": cmd_gen,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    quiet = args.quiet if args.quiet is not None else settings.QUIET
    setup_logging(quiet=quiet)
    init_sentry()

    try:
        status = COMMANDS[args.verb](args)
    except AtomkitError as exc:
        print(json.dumps(error_payload(exc), indent=2), file=sys.stderr)
        status = exc.exit_code
    except Exception as exc:
        logger.exception("Unexpected failure", extra={"operation": args.verb})
        capture_exception(exc, operation=args.verb)
        print(json.dumps(error_payload(exc), indent=2), file=sys.stderr)
        status = EXIT_UNEXPECTED

    metrics_out = args.metrics_out or settings.METRICS_OUT
    if metrics_out:
        export_metrics(metrics_out)
    return status


if __name__ == "__main__":
    sys.exit(main())
