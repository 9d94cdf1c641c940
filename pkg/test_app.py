import csv
import json

import pytest

from algebra import CStarAlgebra, State
from app import (
    EXIT_CERTIFICATE_FAILURE,
    EXIT_INCONCLUSIVE,
    EXIT_MALFORMED,
    EXIT_MISSING_INPUT,
    EXIT_OK,
    EXIT_PROPERTY_FAILURE,
    EXIT_USAGE,
    main,
)
from certifier import AxiomReport, PropertyResult
from modules import HilbertModule, standard_basis_system
from tools.serialization import algebra_to_json, module_element_to_json, spec_to_json
from uniformity import PseudoMetricSpec


def _write(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _scenario(tmp_path, name, generator, **overrides):
    payload = {
        "name": name,
        "algebra": {"block_dims": [2, 1]},
        "generator": generator,
        "truncation_ladder": [4, 8, 16],
        "epsilon_ladder": [0.5, 0.1],
        "spec_battery_size": 3,
        "ball_sample_size": 24,
        "system_size": 3,
        "kappa_threshold": 1e-2,
        **overrides,
    }
    return _write(tmp_path / f"{name}.json", payload)


def test_axioms_pass(tmp_path, out_dir, capsys):
    config = _write(tmp_path / "axioms.json", {"triples": 50, "pairs": 20, "specs": 4})
    assert main(["axioms", config, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    assert "properties hold" in capsys.readouterr().out
    report = json.loads((out_dir / "axioms.json").read_text(encoding="utf-8"))
    assert report["passed"] and report["admissible"]


def test_axioms_reject_non_admissible_system(tmp_path, out_dir, capsys):
    row = [{"scalar": 1.0}, {"scalar": 0.0}, {"scalar": 0.0}, {"scalar": 0.0}]
    config = _write(tmp_path / "bad.json", {"triples": 10, "pairs": 5, "specs": 2, "system_override": [row, row]})
    assert main(["axioms", config, "--out", str(out_dir), "--quiet"]) == EXIT_CERTIFICATE_FAILURE
    assert "NOT ADMISSIBLE override" in capsys.readouterr().out


def test_axioms_property_failure_exit_code(out_dir, monkeypatch, capsys):
    failing = PropertyResult(name="triangle")
    failing.record(-1.0, {"points": []})
    report = AxiomReport(name="axioms", seed=0, passed=False, admissible=True, properties=[failing])
    monkeypatch.setattr("app.run_axioms", lambda config: report)
    assert main(["axioms", "--out", str(out_dir), "--quiet"]) == EXIT_PROPERTY_FAILURE
    assert "FAILED triangle" in capsys.readouterr().out


def test_malformed_and_missing_inputs(tmp_path, out_dir):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert main(["certify", str(broken), "--out", str(out_dir), "--quiet"]) == EXIT_MALFORMED
    invalid = _write(tmp_path / "invalid.json", {"name": "x"})
    assert main(["certify", invalid, "--out", str(out_dir), "--quiet"]) == EXIT_MALFORMED
    missing = str(tmp_path / "nowhere.json")
    assert main(["certify", missing, "--out", str(out_dir), "--quiet"]) == EXIT_MISSING_INPUT


def test_usage_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as excinfo:
        main(["certify", "x.json", "--bogus"])
    assert excinfo.value.code == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_certify_writes_report_and_tables(tmp_path, out_dir, capsys):
    config = _scenario(tmp_path, "pow2", {"rule": "diagonal", "decay": "pow2_decay"})
    assert main(["certify", config, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    assert "pow2: COMPACT_CONSISTENT" in capsys.readouterr().out

    report = json.loads((out_dir / "pow2.json").read_text(encoding="utf-8"))
    assert report["verdict"] == "COMPACT_CONSISTENT"
    with open(out_dir / "pow2_tails.csv", newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["D", "kappa_D"]
    assert [float(r[1]) for r in rows[1:]] == pytest.approx([2.0 ** -5, 2.0 ** -9, 2.0 ** -17], abs=1e-12)
    with open(out_dir / "pow2_nets.csv", newline="", encoding="utf-8") as handle:
        header = next(csv.reader(handle))
    assert header == ["D", "eps", "spec_id", "net_size", "covered"]


def test_certify_inconclusive_exit_code(tmp_path, out_dir):
    config = _scenario(tmp_path, "harmonic", {"rule": "diagonal", "decay": "harmonic"}, kappa_threshold=1e-6)
    assert main(["certify", config, "--out", str(out_dir), "--quiet"]) == EXIT_INCONCLUSIVE


def test_seed_override_changes_the_hash(tmp_path, out_dir):
    config = _scenario(tmp_path, "identity", {"rule": "diagonal"})
    assert main(["certify", config, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    first = json.loads((out_dir / "identity.json").read_text(encoding="utf-8"))
    assert main(["certify", config, "--out", str(out_dir), "--seed", "11", "--quiet"]) == EXIT_OK
    second = json.loads((out_dir / "identity.json").read_text(encoding="utf-8"))
    assert second["seed"] == 11
    assert first["config_hash"] != second["config_hash"]
    assert first["verdict"] == second["verdict"] == "NONCOMPACT_WITNESSED"


def test_replay_round_trip(tmp_path, out_dir, capsys):
    config = _scenario(tmp_path, "pow2", {"rule": "diagonal", "decay": "pow2_decay"})
    assert main(["certify", config, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    report_path = out_dir / "pow2.json"
    assert main(["replay", str(report_path), "--quiet"]) == EXIT_OK
    assert main(["replay", str(report_path), "--config", config, "--quiet"]) == EXIT_OK
    assert main(["replay", str(report_path), "--config", config, "--seed", "5", "--quiet"]) == EXIT_CERTIFICATE_FAILURE

    report = json.loads(report_path.read_text(encoding="utf-8"))
    record = next(r for r in report["boundedness"]["nets"] if len(r["centers"]) >= 2)
    record["centers"] = record["centers"][:-1]
    tampered = _write(tmp_path / "tampered.json", report)
    assert main(["replay", tampered, "--quiet"]) == EXIT_CERTIFICATE_FAILURE
    assert "FAILED" in capsys.readouterr().out


def test_net_with_diameter_radius(tmp_path, out_dir, capsys):
    algebra = CStarAlgebra((2, 1))
    module = HilbertModule(algebra, 3)
    points = [module.basis(i) for i in range(3)]
    spec = PseudoMetricSpec(standard_basis_system(module), tuple(State.tracial(algebra) for _ in range(3)), "basis")
    points_path = _write(tmp_path / "points.json", {
        "algebra": algebra_to_json(algebra),
        "points": [module_element_to_json(x) for x in points],
    })
    spec_path = _write(tmp_path / "spec.json", {"algebra": algebra_to_json(algebra), "spec": spec_to_json(spec)})

    assert main(["net", points_path, spec_path, "2.0", "--out", str(out_dir), "--quiet"]) == EXIT_OK
    report = json.loads((out_dir / "net_basis.json").read_text(encoding="utf-8"))
    assert report["centers"] == [0]
    assert report["verified"]
    lines = (out_dir / "distances_basis.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "point,0,1,2"
    assert len(lines) == 4

    assert main(["net", points_path, spec_path, "0.1", "--out", str(out_dir), "--quiet"]) == EXIT_OK
    report = json.loads((out_dir / "net_basis.json").read_text(encoding="utf-8"))
    assert report["centers"] == [0, 1, 2]
    assert main(["net", points_path, spec_path, "0", "--out", str(out_dir), "--quiet"]) == EXIT_MALFORMED


def test_witness_subcommand(tmp_path, out_dir):
    identity = _scenario(tmp_path, "identity", {"rule": "diagonal"})
    assert main(["witness", identity, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    certificate = json.loads((out_dir / "identity_witness.json").read_text(encoding="utf-8"))
    assert certificate["conclusive"]
    assert certificate["indices"] == list(range(16))
    assert certificate["spec"]["spec_id"] == "witness"

    pow2 = _scenario(tmp_path, "pow2", {"rule": "diagonal", "decay": "pow2_decay"})
    assert main(["witness", pow2, "--out", str(out_dir), "--quiet"]) == EXIT_INCONCLUSIVE
