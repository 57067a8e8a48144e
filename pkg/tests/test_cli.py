import json

import pytest
import yaml

from grassmannian.cli import main
from grassmannian.errors import ConfigInvalid
from grassmannian.scenarios import parse_config, run_scenario, verify_suite


def write(tmp_path, data, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(data))
    return str(p)


TRANSITION = {"id": "t", "experiment": "chart-transition", "resolution": 256, "seed": 42,
              "params": {"sigma1": {"name": "circle"}, "sigma2": {"name": "circle", "center": [0.1, 0.0]},
                         "trials": 5}}
FOLD = {"id": "fold", "experiment": "chart-transition", "resolution": 256, "seed": 1,
        "params": {"sigma1": {"name": "circle"}, "sigma2": {"name": "circle", "center": [0.2, 0.0]},
                   "section": {"amplitude": 0.45, "mode": 8}, "chart2_radius": 0.9, "trials": 1}}


@pytest.mark.parametrize("raw,field", [
    ({"experiment": "chart-transition", "resolution": 8}, "resolution"),
    ({"experiment": "nope"}, "experiment"),
    ({"experiment": "transport", "bogus": 1}, "bogus"),
    ({"experiment": "transport", "seed": -1}, "seed"),
    ({"experiment": "transport", "tolerances": {"not_a_tol": 1}}, "tolerances"),
    ({"experiment": "transport", "ambient": {"kind": "klein"}}, "ambient"),
    ({"experiment": "transport", "params": {"source": {"name": "trefoil"}}}, "source"),
])
def test_invalid_configs(raw, field):
    with pytest.raises(ConfigInvalid) as exc:
        parse_config(raw)
    assert field in str(exc.value)


def test_resolution_8_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, dict(TRANSITION, resolution=8))
    assert main(["chart-transition", "--config", cfg]) == 2
    assert "resolution" in capsys.readouterr().err


def test_empty_suite_passes(tmp_path):
    report, _ = verify_suite([])
    assert report["summary"]["passed"] and report["summary"]["scenarios"] == 0
    assert main(["verify-all", "--config", write(tmp_path, {"scenarios": []})]) == 0


def test_transition_scenario_passes(tmp_path, capsys):
    cfg = write(tmp_path, TRANSITION)
    assert main(["chart-transition", "--config", cfg, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    (sc,) = report["scenarios"]
    assert sc["passed"] and sc["error"] is None
    for c in sc["checks"]:
        assert set(c) == {"name", "value", "tolerance", "relation", "passed"}


def test_failing_scenario_aggregates(tmp_path, capsys):
    cfg = write(tmp_path, {"scenarios": [TRANSITION, FOLD]})
    assert main(["verify-all", "--config", cfg, "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["failed"] == ["fold"] and not report["summary"]["passed"]
    fold = [s for s in report["scenarios"] if s["id"] == "fold"][0]
    assert fold["error"]["type"] == "NotDiffeomorphism" and fold["error"]["message"]


def test_determinism_and_outputs(tmp_path):
    cfg = write(tmp_path, TRANSITION)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["chart-transition", "--config", cfg, "--out", str(a)]) == 0
    assert main(["chart-transition", "--config", cfg, "--out", str(b)]) == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "timings.json").exists()
    csvs = sorted(p.name for p in a.glob("*.csv"))
    assert csvs and all(name.startswith("t__") for name in csvs)
    assert [p.name for p in sorted(a.glob("*.csv"))] == [p.name for p in sorted(b.glob("*.csv"))]


def test_seed_override_changes_report(tmp_path, capsys):
    cfg = write(tmp_path, TRANSITION)
    main(["chart-transition", "--config", cfg, "--json"])
    first = capsys.readouterr().out
    main(["chart-transition", "--config", cfg, "--json", "--seed", "7"])
    second = capsys.readouterr().out
    assert json.loads(second)["scenarios"][0]["seed"] == 7 and first != second


def test_default_suite_selection(capsys):
    # without --config the first matching scenario of the built-in suite runs
    assert main(["lift-path"]) == 0
    out = capsys.readouterr().out
    assert "PASS  lift-circle-ellipse" in out and "1/1 scenarios passed" in out


def test_run_scenario_captures_errors():
    (sc,) = parse_config(FOLD)
    out = run_scenario(sc)
    assert not out.report["passed"] and out.report["error"]["type"] == "NotDiffeomorphism"
