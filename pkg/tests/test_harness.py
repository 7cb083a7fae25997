"""
Tests for instance generation, JSON documents, the suite runner and the CLI
"""
import dataclasses
import json

import numpy as np
import pytest

from atomkit.atomic import AtomicSystemCandidate, verify_atomic_system
from atomkit.config import Settings
from atomkit.errors import (
    EXIT_ATOMKIT_ERROR,
    EXIT_CERTIFICATE_FAILED,
    EXIT_OK,
    ConfigError,
    InfeasibleSpecError,
    SchemaError,
)
from atomkit.frames import mercedes_benz
from atomkit.harness import dumps, from_document, generate, instance_seed, load, loads, run_suite, save, to_document
from atomkit.harness.cli import main
from atomkit.harness.generators import random_projection
from atomkit.linalg import LinearMap, range_inclusion
from atomkit.linalg.inverses import idempotence_residual
from atomkit.linalg.spaces import INF, PNormSpace
from atomkit.models.schemas import InstanceSpec, SuiteConfig
from atomkit.seqspace import NormMode, embed_classical

ALL_SCENARIOS = [
    "e3",
    "e4",
    "converse",
    "characterize",
    "complemented",
    "shift-example",
    "embed-classical",
    "kframe",
]


def _outcomes(report):
    return [outcome.model_dump() for outcome in report.outcomes]


class TestGenerators:
    """Seeded instances with their hypotheses built in"""

    @pytest.mark.parametrize("scenario", ALL_SCENARIOS)
    def test_same_seed_same_inputs(self, scenario):
        spec = InstanceSpec(scenario=scenario, seed=42)
        first, second = generate(spec), generate(spec)
        assert dumps(first) == dumps(second)

    def test_different_seeds_differ(self):
        a = generate(InstanceSpec(scenario="e3", seed=1))
        b = generate(InstanceSpec(scenario="e3", seed=2))
        assert not np.array_equal(a.family.atoms, b.family.atoms)

    def test_shift_example_atoms(self):
        instance = generate(InstanceSpec(scenario="shift-example", dims=(5, 4, 1)))
        np.testing.assert_array_equal(instance.family.atoms, np.eye(5)[:, 1:])

    def test_e3_range_inclusion_by_construction(self):
        instance = generate(InstanceSpec(scenario="e3", seed=3, dims=(3, 5, 1), rank_T=2))
        assert np.linalg.matrix_rank(instance.family.atoms) == 2
        T = LinearMap.from_matrix(instance.family.atoms)
        assert range_inclusion(instance.K, T)

    def test_rank_target_above_dimensions(self):
        with pytest.raises(InfeasibleSpecError):
            generate(InstanceSpec(scenario="e3", dims=(3, 5, 1), rank_T=4))

    def test_rank_K_above_rank_T(self):
        with pytest.raises(InfeasibleSpecError):
            generate(InstanceSpec(scenario="converse", rank_T=1, rank_K=2))

    def test_negative_needs_room_outside_range(self):
        with pytest.raises(InfeasibleSpecError):
            generate(InstanceSpec(scenario="characterize", negative=True))

    def test_random_projection_is_idempotent(self, rng):
        onto = rng.standard_normal((4, 2))
        P = random_projection(rng, onto)
        assert idempotence_residual(P) <= 1e-10
        np.testing.assert_allclose(P @ onto, onto, atol=1e-10)

    def test_instance_seed_depends_on_position_only(self):
        assert instance_seed(7, 0, 3) == instance_seed(7, 0, 3)
        assert instance_seed(7, 0, 3) != instance_seed(7, 1, 3)


class TestSerialization:
    """Versioned JSON documents"""

    def test_linear_map_round_trip(self, rng):
        A = LinearMap(PNormSpace(3, INF), PNormSpace(2, 1.5), rng.standard_normal((2, 3)))
        back = loads(dumps(A))
        assert back == A

    def test_inf_exponent_is_a_string(self):
        document = to_document(PNormSpace(2, INF))
        assert document["schema_version"] == 1
        assert document["data"]["p"] == "inf"

    def test_family_and_functionals_round_trip(self, rng):
        family = mercedes_benz()
        assert np.array_equal(loads(dumps(family)).atoms, family.atoms)
        H = embed_classical(rng.standard_normal((4, 3)))
        back = loads(dumps(H))
        assert back.scheme == H.scheme
        for a, b in zip(back.rows, H.rows):
            np.testing.assert_array_equal(a, b)

    def test_certificate_round_trip(self, rng, basis3):
        cert = verify_atomic_system(
            AtomicSystemCandidate(basis3, embed_classical(np.eye(3)), LinearMap.identity(PNormSpace(3)))
        )
        back = loads(dumps(cert))
        assert back.verdict == cert.verdict
        assert back == cert

    def test_scenario_input_round_trip(self):
        instance = generate(InstanceSpec(scenario="e3", seed=9))
        assert dumps(loads(dumps(instance))) == dumps(instance)

    def test_mismatched_dims_name_the_field(self):
        document = to_document(LinearMap.from_matrix(np.eye(2)))
        document["data"]["codomain"]["dim"] = 3
        with pytest.raises(SchemaError) as exc_info:
            from_document(document)
        assert "codomain.dim" in exc_info.value.message

    def test_invalid_field_is_located(self):
        document = to_document(PNormSpace(2))
        document["data"]["dim"] = 0
        with pytest.raises(SchemaError) as exc_info:
            from_document(document)
        assert exc_info.value.details["field_errors"][0]["field"] == "dim"

    def test_malformed_json_reports_line(self):
        with pytest.raises(SchemaError) as exc_info:
            loads('{\n  "schema_version": 1,\n  oops\n}')
        assert "line 3" in exc_info.value.message

    def test_unknown_version_rejected(self):
        document = to_document(PNormSpace(2))
        document["schema_version"] = 2
        with pytest.raises(SchemaError):
            from_document(document)

    def test_wrong_kind_rejected(self):
        with pytest.raises(SchemaError):
            from_document(to_document(PNormSpace(2)), expect="linear-map")

    def test_save_and_load(self, tmp_path, rng):
        A = LinearMap.from_matrix(rng.standard_normal((3, 3)))
        path = tmp_path / "map.json"
        save(A, path)
        assert load(path, expect="linear-map") == A

    def test_five_hundred_documents_round_trip(self):
        for i in range(500):
            instance = generate(InstanceSpec(scenario=ALL_SCENARIOS[i % len(ALL_SCENARIOS)], seed=i))
            text = dumps(instance)
            assert dumps(loads(text)) == text


class TestSuite:
    """Reproducible theorem-suite reports"""

    def test_empty_scenario_list(self):
        report = run_suite(SuiteConfig(scenarios=[], instances=10))
        assert report.outcomes == [] and report.success

    @pytest.mark.parametrize("scenario", ALL_SCENARIOS)
    def test_every_scenario_passes(self, scenario):
        report = run_suite(SuiteConfig(scenarios=[scenario], instances=4, seed=11))
        failures = [o for o in report.outcomes if not o.verdict]
        assert not failures, failures
        assert report.passed == 4

    def test_e3_hundred_instances(self):
        report = run_suite(SuiteConfig(scenarios=["e3"], instances=100))
        assert report.passed == 100 and report.success

    def test_characterize_negatives_agree(self):
        report = run_suite(SuiteConfig(scenarios=["characterize"], instances=6, seed=3))
        negatives = report.outcomes[1::2]
        assert report.success
        assert all(not any(o.verdicts.values()) for o in negatives)

    def test_deterministic_modulo_timing(self):
        config = SuiteConfig(scenarios=["e3", "kframe"], instances=3, seed=5)
        assert _outcomes(run_suite(config)) == _outcomes(run_suite(config))

    def test_worker_count_does_not_change_report(self):
        config = SuiteConfig(scenarios=["converse", "e4"], instances=3, seed=8)
        assert _outcomes(run_suite(config, workers=1)) == _outcomes(run_suite(config, workers=3))

    def test_report_round_trips(self):
        report = run_suite(SuiteConfig(scenarios=["shift-example"], instances=2))
        assert loads(dumps(report)) == report

    def test_serialized_reports_are_byte_identical(self):
        config = SuiteConfig(scenarios=["e3", "characterize", "embed-classical"], instances=3, seed=6)
        first = run_suite(config, workers=1).model_copy(update={"wall_time": 0.0})
        second = run_suite(config, workers=2).model_copy(update={"wall_time": 0.0})
        assert dumps(first) == dumps(second)

    def test_embed_classical_fifty_instances(self):
        report = run_suite(SuiteConfig(scenarios=["embed-classical"], instances=50, seed=4))
        assert report.passed == 50 and report.success

    def test_e4_hundred_instances(self):
        report = run_suite(SuiteConfig(scenarios=["e4"], instances=100, seed=2))
        assert report.passed == 100 and report.success


class TestCli:
    """Verbs and exit codes"""

    def _write(self, path, payload):
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    def test_gen_construct_verify(self, tmp_path):
        spec = self._write(tmp_path / "spec.json", {"scenario": "e3", "seed": 4})
        inputs = str(tmp_path / "inputs.json")
        system = str(tmp_path / "system.json")
        assert main(["gen", spec, "--json-out", inputs, "--quiet"]) == EXIT_OK
        assert main(["construct", "e3", inputs, "--json-out", system, "--quiet"]) == EXIT_OK
        assert main(["verify", system, "--quiet"]) == EXIT_OK

    def test_verify_without_functionals_is_an_error(self, tmp_path, capsys):
        spec = self._write(tmp_path / "spec.json", {"scenario": "e3", "seed": 4})
        inputs = str(tmp_path / "inputs.json")
        main(["gen", spec, "--json-out", inputs, "--quiet"])
        assert main(["verify", inputs, "--quiet"]) == EXIT_ATOMKIT_ERROR
        assert '"validation_error"' in capsys.readouterr().err

    def test_failing_certificate_exit_code(self, tmp_path, rng):
        instance = generate(InstanceSpec(scenario="embed-classical", seed=1))
        broken = embed_classical(rng.standard_normal((instance.family.M, 3)))
        path = tmp_path / "broken.json"
        save(dataclasses.replace(instance, H=broken), path)
        assert main(["verify", str(path), "--quiet"]) == EXIT_CERTIFICATE_FAILED

    def test_characterize_verb(self, tmp_path):
        spec = self._write(tmp_path / "spec.json", {"scenario": "characterize", "seed": 2})
        inputs = str(tmp_path / "inputs.json")
        out = tmp_path / "report.json"
        main(["gen", spec, "--json-out", inputs, "--quiet"])
        assert main(["characterize", inputs, "--json-out", str(out), "--quiet"]) == EXIT_OK
        assert json.loads(out.read_text())["agree"] is True

    def test_empty_suite_succeeds(self, tmp_path):
        config = self._write(tmp_path / "suite.json", {"scenarios": [], "instances": 5})
        assert main(["suite", config, "--quiet"]) == EXIT_OK

    def test_suite_writes_report_and_metrics(self, tmp_path):
        config = self._write(tmp_path / "suite.json", {"scenarios": ["kframe"], "instances": 2})
        report = tmp_path / "report.json"
        metrics = tmp_path / "metrics.prom"
        status = main(["suite", config, "--json-out", str(report), "--metrics-out", str(metrics), "--quiet"])
        assert status == EXIT_OK
        assert load(report, expect="suite-report").passed == 2
        assert "atomkit_certificates_total" in metrics.read_text()

    def test_malformed_config(self, tmp_path, capsys):
        config = self._write(tmp_path / "suite.json", {"scenarios": ["nope"]})
        assert main(["suite", config, "--quiet"]) == EXIT_ATOMKIT_ERROR
        assert '"config_error"' in capsys.readouterr().err

    def test_flag_overrides_config(self, tmp_path):
        config = self._write(tmp_path / "suite.json", {"scenarios": ["shift-example"], "instances": 50})
        report = tmp_path / "report.json"
        assert main(["suite", config, "--instances", "1", "--json-out", str(report), "--quiet"]) == EXIT_OK
        assert len(load(report).outcomes) == 1

    def test_config_error_type(self, tmp_path):
        from atomkit.harness.cli import _suite_config, build_parser

        path = self._write(tmp_path / "suite.json", {"instances": -1})
        args = build_parser().parse_args(["suite", path])
        with pytest.raises(ConfigError):
            _suite_config(args)

    def test_environment_fills_suite_defaults(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ATOMKIT_INSTANCES", "3")
        monkeypatch.setenv("ATOMKIT_TOL", "1e-7")
        monkeypatch.setattr("atomkit.models.schemas.settings", Settings())
        config = self._write(tmp_path / "suite.json", {"scenarios": ["shift-example"]})
        report = tmp_path / "report.json"
        assert main(["suite", config, "--json-out", str(report), "--quiet"]) == EXIT_OK
        loaded = load(report, expect="suite-report")
        assert len(loaded.outcomes) == 3
        assert loaded.config.tol == 1e-7

    def test_config_file_beats_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ATOMKIT_INSTANCES", "3")
        monkeypatch.setattr("atomkit.models.schemas.settings", Settings())
        config = self._write(tmp_path / "suite.json", {"scenarios": ["shift-example"], "instances": 2})
        report = tmp_path / "report.json"
        assert main(["suite", config, "--json-out", str(report), "--quiet"]) == EXIT_OK
        assert len(load(report).outcomes) == 2

    def test_seed_falls_back_to_settings(self, monkeypatch):
        from atomkit.harness.cli import _seed, build_parser

        monkeypatch.setattr("atomkit.harness.cli.settings", Settings(SEED=13))
        assert _seed(build_parser().parse_args(["verify", "system.json"])) == 13
        assert _seed(build_parser().parse_args(["verify", "system.json", "--seed", "2"])) == 2

    def test_explicit_norm_mode_setting_applies_to_inputs(self, tmp_path, monkeypatch):
        from atomkit.harness.cli import _load_instance, build_parser

        monkeypatch.delenv("ATOMKIT_NORM_MODE", raising=False)
        path = tmp_path / "inputs.json"
        save(generate(InstanceSpec(scenario="characterize", seed=1)), path)
        args = build_parser().parse_args(["characterize", str(path)])

        monkeypatch.setattr("atomkit.harness.cli.settings", Settings())
        assert _load_instance(args).cfg.mode == NormMode.ROW_SUP
        monkeypatch.setattr("atomkit.harness.cli.settings", Settings(NORM_MODE="flat"))
        assert _load_instance(args).cfg.mode == NormMode.FLAT
