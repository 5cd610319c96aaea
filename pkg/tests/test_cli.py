import csv
import io
import json
import math

import pytest

from sisbarrier import report
from sisbarrier.cli import main
from sisbarrier.config import parse_config

BASE = {"m": 2, "n_elements": 3, "lambda_per_hour": 1e-5, "t1": 30, "t1_unit": "days",
        "demand_rate_per_year": 0.5}


@pytest.fixture
def write_config(tmp_path):
    def write(data, name="job.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_evaluate_text_and_json(write_config, capsys):
    path = write_config(BASE)
    code, out, _ = run(capsys, "evaluate", "--config", path)
    assert code == 0
    assert "5.13760e-05" in out and "SIL4" in out and "SIL2" in out
    assert "low_demand" in out
    code, out, _ = run(capsys, "evaluate", "--config", path, "--json")
    data = json.loads(out)
    assert data["pfd_average"]["exact"] == 5.137598257041152e-05
    assert data["pfd_average"]["approximate"] == pytest.approx(5.184e-5, rel=1e-14)
    assert data["sil"]["low_demand"]["level"] == "SIL4"
    assert data["sil"]["high_demand"]["level"] == "SIL2"
    assert data["demand_mode"] == "low_demand"
    assert data["warnings"] == []


def test_json_output_file_round_trips(write_config, tmp_path, capsys):
    path = write_config(dict(BASE, partial_tests=3, coverage=0.5))
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "evaluate", "--config", path, "--json", "--output", str(target))
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    assert json.loads(json.dumps(data)) == data
    assert data["barrier"]["t0_hours"] == 240.0
    assert data["pfh_average"]["approximate"] is None
    assert any("partial tests" in w for w in data["warnings"])


def test_validity_warning_surfaces(write_config, capsys):
    path = write_config(dict(BASE, m=1, n_elements=1, lambda_per_hour=1e-3, t1=500, t1_unit="hours"))
    code, out, _ = run(capsys, "evaluate", "--config", path)
    assert code == 0
    assert "warning:" in out and "validity" in out


def test_curve_csv(write_config, tmp_path, capsys):
    path = write_config(dict(BASE, partial_tests=3, coverage=0.5))
    code, out, _ = run(capsys, "curve", "--config", path, "--samples", "5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    basic = [r for r in rows if r["trace"] == "basic"]
    partial = [r for r in rows if r["trace"] == "partial"]
    assert len(basic) == (5 - 1) * 3 + 1
    assert basic[0]["t_hours"] == "0.000000" and float(basic[0]["pfd_exact"]) == 0.0
    assert basic[-1]["pfd_exact"] == "1.53666e-04"
    assert {r["trace"] for r in rows} == {"basic", "partial", "basic_average", "partial_average"}
    # the partial trace drops at each partial test
    at_240 = [float(r["pfd_exact"]) for r in partial if r["t_hours"] == "240.000000"]
    assert len(at_240) == 2 and at_240[1] < at_240[0]
    target = tmp_path / "curve.csv"
    run(capsys, "curve", "--config", path, "--samples", "5", "--output", str(target))
    assert target.read_text() == out


def test_sweep_over_t1(write_config, capsys):
    data = {"m": 1, "n_elements": 1, "lambda_per_hour": 1e-6, "t1": 180, "t1_unit": "days",
            "sweep": {"parameter": "t1", "start": 180, "stop": 720, "steps": 3, "scale": "log"},
            "target_sil": 2}
    code, out, _ = run(capsys, "sweep", "--config", write_config(data), "--json")
    assert code == 0
    result = json.loads(out)
    assert [r["value"] for r in result["rows"]] == pytest.approx([180, 360, 720])
    pfd = [r["pfd_exact"] for r in result["rows"]]
    assert pfd == sorted(pfd)
    assert result["summary"]["best"] == pytest.approx(720)


def test_coverage_sweep_and_infeasible_target(write_config, tmp_path, capsys):
    data = dict(BASE, partial_tests=4, target_sil=4,
                sweep={"parameter": "coverage", "start": 0.0, "stop": 1.0, "steps": 6})
    data["lambda_per_hour"] = 1e-4
    csv_path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "--config", write_config(data), "--output", str(csv_path))
    assert code == 0
    assert "no feasible value reaches SIL 4" in out
    rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
    values = [float(r["pfd_exact"]) for r in rows]
    assert all(b <= a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize(
    "data",
    [
        dict(BASE, m=4),
        dict(BASE, coverage=1.5),
        dict(BASE, bogus=1),
        dict(BASE, sweep={"parameter": "t1", "values": []}),
        dict(BASE, sweep={"parameter": "t1", "start": 1, "stop": 2, "steps": 0}),
        dict(BASE, t1_unit="weeks"),
        {"m": 1},
    ],
)
def test_bad_configs_exit_2(write_config, capsys, data):
    command = "sweep" if "sweep" in data else "evaluate"
    code, _, err = run(capsys, command, "--config", write_config(data))
    assert code == 2
    assert err.startswith("error:")


def test_missing_blocks_and_files_exit_2(write_config, tmp_path, capsys):
    assert run(capsys, "sweep", "--config", write_config(BASE))[0] == 2
    assert run(capsys, "validate", "--config", write_config(BASE))[0] == 2
    assert run(capsys, "evaluate", "--config", str(tmp_path / "absent.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "evaluate", "--config", str(bad))[0] == 2
    assert run(capsys, "curve", "--config", write_config(BASE), "--samples", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_unwritable_output_exits_4(write_config, tmp_path, capsys):
    target = tmp_path / "missing_dir" / "out.json"
    code, _, err = run(capsys, "evaluate", "--config", write_config(BASE), "--output", str(target))
    assert code == 4
    assert "I/O error" in err


def test_numerical_failure_exits_3(write_config, capsys):
    # every trial leaves the barrier down, so no PFH window stratum has a working start
    data = dict(BASE, m=1, n_elements=1, lambda_per_hour=5.0, t1=100, t1_unit="hours",
                simulation={"trials": 20, "seed": 1, "grid_points": 10})
    code, _, err = run(capsys, "validate", "--config", write_config(data))
    assert code == 3
    assert err.startswith("numerical error:")


def test_validate_passes_and_detects_corruption(write_config, capsys, monkeypatch):
    data = dict(BASE, lambda_per_hour=1e-3, t1=300, t1_unit="hours",
                simulation={"trials": 200_000, "seed": 17, "grid_points": 7})
    path = write_config(data)
    code, out, _ = run(capsys, "validate", "--config", path, "--json")
    assert code == 0
    result = json.loads(out)
    assert result["passed"] and len(result["checks"]) == 9

    real = report.exact.pfd_average

    def corrupted(spec):
        ev = real(spec)
        return type(ev)(ev.value * 1.2, ev.method)

    monkeypatch.setattr(report.exact, "pfd_average", corrupted)
    code, out, _ = run(capsys, "validate", "--config", path)
    assert code == 1
    assert "FAIL" in out


def test_config_days_conversion_and_defaults():
    job = parse_config(BASE)
    assert job.spec.t1 == 720.0
    assert job.spec.test_policy.partial_test_count == 1
    assert job.simulation is None and job.sweep is None
    assert math.isclose(job.spec_for("t1", 10).t1, 240.0)
    assert job.spec_for("partial_tests", 4.0).test_policy.partial_test_count == 4
