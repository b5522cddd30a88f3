from __future__ import annotations

import json

import pytest

from swarmplan.cli import EXIT_CONFIG, EXIT_INVALID, EXIT_OK, main


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "sc.json"
    assert main(["scenario", "--points", "10", "--seed", "3", "--out", str(path)]) == EXIT_OK
    return path


def _load(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_scenario_to_stdout(capsys):
    assert main(["scenario", "--points", "2", "--seed", "1"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["points"]) == 3


def test_plan_then_validate(tmp_path, scenario_file):
    plan_path = tmp_path / "plan.json"
    assert main(["plan", str(scenario_file), "--uavs", "2", "--out", str(plan_path)]) == EXIT_OK
    doc = _load(plan_path)
    assert doc["planner"] == "proposed"
    assert doc["feasible"]
    assert len(doc["fleet"]) == 2
    assert doc["metrics"]["total_J"] > 0

    report_path = tmp_path / "report.json"
    assert main(["validate", str(plan_path), str(scenario_file), "--out", str(report_path)]) == EXIT_OK
    assert _load(report_path)["valid"]


def test_tampered_plan_fails_validation(tmp_path, scenario_file):
    plan_path = tmp_path / "plan.json"
    main(["plan", str(scenario_file), "--uavs", "2", "--out", str(plan_path)])
    doc = _load(plan_path)
    entry = next(u for u in doc["uavs"] if len(u["vertices"]) > 1)
    entry["cost_J"] += 1000.0
    plan_path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["validate", str(plan_path), str(scenario_file)]) == EXIT_INVALID


def test_baseline_over_budget_is_still_valid(tmp_path, scenario_file):
    plan_path = tmp_path / "base.json"
    assert main(["baseline", str(scenario_file), "--uavs", "1", "--budget", "10", "--out", str(plan_path)]) == EXIT_OK
    assert _load(plan_path)["budget_violations"] == [0]
    assert main(["validate", str(plan_path), str(scenario_file)]) == EXIT_OK


def test_oracle_rejects_large_instances(tmp_path):
    sc = tmp_path / "big.json"
    main(["scenario", "--points", "9", "--out", str(sc)])
    assert main(["oracle", str(sc), "--uavs", "1"]) == EXIT_CONFIG


def test_bad_config_file(tmp_path, scenario_file):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"uavs": 0}), encoding="utf-8")
    assert main(["plan", str(scenario_file), "--config", str(cfg)]) == EXIT_CONFIG
    cfg.write_text(json.dumps({"unknown": 1}), encoding="utf-8")
    assert main(["plan", str(scenario_file), "--config", str(cfg)]) == EXIT_CONFIG


def test_missing_scenario(tmp_path):
    assert main(["plan", str(tmp_path / "nope.json")]) == EXIT_CONFIG


def test_budget_list_shorter_than_fleet(scenario_file):
    assert main(["plan", str(scenario_file), "--uavs", "3", "--budget", "1e6", "2e6"]) == EXIT_CONFIG


def test_smoke_experiment(tmp_path, monkeypatch):
    monkeypatch.setenv("SWARMPLAN_JOBS", "1")
    out = tmp_path / "smoke"
    assert main(["experiment", "--preset", "smoke", "--runs", "1", "--out", str(out)]) == EXIT_OK
    assert (out / "results.csv").is_file()
    assert _load(out / "summary.json")["rows"] == 4


def test_validate_accepts_any_topological_vertex_order(tmp_path, scenario_file):
    plan_path = tmp_path / "plan.json"
    main(["plan", str(scenario_file), "--uavs", "1", "--out", str(plan_path)])
    doc = _load(plan_path)
    entry = doc["uavs"][0]
    assert len(entry["vertices"]) > 2
    rows = list(zip(entry["vertices"], entry["parents"], entry["cumulative_J"]))
    reordered = [rows[0], *reversed(rows[1:])]
    entry["vertices"], entry["parents"], entry["cumulative_J"] = (list(col) for col in zip(*reordered))
    plan_path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["validate", str(plan_path), str(scenario_file)]) == EXIT_OK


def test_validate_checks_the_fleet_budget_not_the_stored_one(tmp_path, scenario_file, caplog):
    plan_path = tmp_path / "plan.json"
    main(["plan", str(scenario_file), "--uavs", "1", "--out", str(plan_path)])
    doc = _load(plan_path)
    doc["uavs"][0]["budget_J"] = "unlimited"
    doc["fleet"][0]["energy_budget"] = 100.0
    plan_path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["validate", str(plan_path), str(scenario_file)]) == EXIT_INVALID
    assert "failed validation" in caplog.text


def test_infeasible_oracle_plan_is_valid(tmp_path):
    sc = tmp_path / "small.json"
    main(["scenario", "--points", "3", "--seed", "5", "--out", str(sc)])
    plan_path = tmp_path / "oracle.json"
    assert main(["oracle", str(sc), "--uavs", "2", "--budget", "10", "10", "--out", str(plan_path)]) == EXIT_OK
    doc = _load(plan_path)
    assert not doc["feasible"]
    assert doc["uncovered"] == [1, 2, 3]
    assert main(["validate", str(plan_path), str(sc)]) == EXIT_OK
