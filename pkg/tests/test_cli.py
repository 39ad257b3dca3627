"""CLI round trip: config validation, exit codes, deterministic output."""
import json
from pathlib import Path

from calrlab.cli import EXIT_ASSERTION, EXIT_CONFIG, EXIT_OK, main


def _write_config(tmp_path, name, scenario, params, out):
    cfg = {"scenario": scenario, "out": str(out), "params": params}
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("dcm_convergence", "superlens", "carleman_suite"):
        assert name in out


def test_validate_config_paths(tmp_path):
    good = _write_config(tmp_path, "good.json", "maxwell_3sphere_suite",
                         {"count": 5}, tmp_path / "out")
    assert main(["validate-config", str(good)]) == EXIT_OK
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"scenario": "nonsense"}))
    assert main(["validate-config", str(bad)]) == EXIT_CONFIG
    worse = tmp_path / "worse.json"
    worse.write_text("{not json")
    assert main(["validate-config", str(worse)]) == EXIT_CONFIG
    neg = _write_config(tmp_path, "neg.json", "dcm_convergence",
                        {"deltas": [1e-2, -1e-3]}, tmp_path / "out")
    assert main(["validate-config", str(neg)]) == EXIT_CONFIG


def test_run_writes_reports_and_is_deterministic(tmp_path):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    cfg1 = _write_config(tmp_path, "c1.json", "maxwell_3sphere_suite",
                         {"count": 30, "n_max": 8}, out1)
    cfg2 = _write_config(tmp_path, "c2.json", "maxwell_3sphere_suite",
                         {"count": 30, "n_max": 8}, out2)
    assert main(["run", str(cfg1)]) == EXIT_OK
    assert main(["run", str(cfg2)]) == EXIT_OK
    csv1 = (out1 / "maxwell_3sphere_suite.csv").read_bytes()
    csv2 = (out2 / "maxwell_3sphere_suite.csv").read_bytes()
    assert csv1 == csv2                      # bit-identical for equal config+seed
    manifest = json.loads((out1 / "maxwell_3sphere_suite.manifest.json").read_text())
    assert manifest["package"] == "calrlab"
    assert "config_hash" in manifest and len(manifest["config_hash"]) == 16
    m2 = json.loads((out2 / "maxwell_3sphere_suite.manifest.json").read_text())
    assert manifest["config_hash"] == m2["config_hash"]


def test_run_assertion_failure_exit_code(tmp_path):
    cfg = _write_config(tmp_path, "fail.json", "maxwell_3sphere_suite",
                        {"count": 10, "n_max": 6, "stability": -1.0},
                        tmp_path / "outf")
    assert main(["run", str(cfg)]) == EXIT_ASSERTION


def test_run_config_error_exit_code(tmp_path):
    missing = tmp_path / "missing.json"
    assert main(["run", str(missing)]) == EXIT_CONFIG


def test_run_bad_scenario_params_exit_config(tmp_path):
    cfg = _write_config(tmp_path, "badparam.json", "dcm_convergence",
                        {"r1": 2.0, "r2": 1.0, "deltas": [1e-2]},
                        tmp_path / "outp")
    assert main(["run", str(cfg)]) == EXIT_CONFIG
