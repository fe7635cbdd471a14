import json

import pytest

from discde.cli import main
from discde.suites import (
    Scenario,
    ScenarioError,
    SuiteReport,
    lint_report,
    run_suite,
)


def test_scenario_validation():
    with pytest.raises(ScenarioError):
        Scenario(rmax=1.5)
    with pytest.raises(ScenarioError):
        Scenario(suites=("S1", "S99"))
    with pytest.raises(ValueError):
        Scenario(coefficient="1 +")


def test_scenario_from_config(tmp_path):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text(
        "# comment\n"
        "coefficient = 25\n"
        "rmax = 0.9\n"
        "c0 = 1.5\n"
        "eps0 = 0.2\n"
        "radii = 0.5, 0.8\n"
        "suites = S1, S6\n"
        "format = csv\n"
    )
    sc = Scenario.from_config(cfg)
    assert sc.coefficient == "25"
    assert sc.rmax == 0.9
    assert sc.radii == (0.5, 0.8)
    assert sc.suites == ("S1", "S6")
    assert sc.fmt == "csv"


def test_scenario_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("speed = fast\n")
    with pytest.raises(ScenarioError):
        Scenario.from_config(cfg)


def test_lint_rejects_missing_anchor():
    report = SuiteReport("S1")
    report.add("nameless", "", {})
    with pytest.raises(ValueError):
        lint_report(report)


def test_s1_trivial_coefficient():
    report = run_suite("S1", Scenario(coefficient="0"))
    assert report.ok
    names = [c.name for c in report.checks]
    assert "at-most-one-zero" in names


def test_s1_oscillatory():
    report = run_suite("S1", Scenario(coefficient="25"))
    assert report.ok
    by_name = {c.name: c for c in report.checks}
    assert by_name["uniform-separation"].values["count"] == 3
    assert by_name["zero-transfer"].values["max_abs_at_images"] < 1e-7


def test_s4_trig():
    report = run_suite("S4", Scenario(coefficient="1"))
    assert report.ok
    by_name = {c.name: c for c in report.checks}
    assert by_name["condition-i-sigma"].values["sigma"] == pytest.approx(1.0)
    assert by_name["disc-radius-rule"].values["value"] == pytest.approx(
        0.09 / 0.49)


def test_s6_deterministic_and_stable():
    sc = Scenario()
    a = run_suite("S6", sc).to_json()
    b = run_suite("S6", sc).to_json()
    assert a == b


def test_s7_chain_holds():
    for coeff in ("1", "0.25", "0.5/(1-z)"):
        report = run_suite("S7", Scenario(coefficient=coeff))
        assert report.ok, coeff


def test_run_suite_unknown():
    with pytest.raises(ScenarioError):
        run_suite("S9", Scenario())


def test_cli_verify_exit_zero(tmp_path, capsys):
    code = main(["verify", "S6", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "S6 critical-points: PASS" in out
    data = json.loads((tmp_path / "report_S6.json").read_text())
    assert data["ok"] is True


def test_cli_zeros_count(tmp_path):
    code = main(["zeros", "--coefficient", "100", "--rmax", "0.95",
                 "--out", str(tmp_path), "--format", "csv"])
    assert code == 0
    lines = (tmp_path / "zeros.csv").read_text().splitlines()
    assert len(lines) == 1 + 7  # header + 7 zeros of sin(10z)/10


def test_cli_stoptime(tmp_path):
    code = main(["stoptime", "--coefficient", "1", "--c0", "2",
                 "--eps0", "0.125", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "forest.jsonl").exists()
    assert (tmp_path / "distribution.csv").exists()


def test_cli_usage_error():
    assert main(["definitely-not-a-command"]) == 2
    assert main(["verify", "S1", "--coefficient", "1 +"]) == 2


def test_cli_solve(tmp_path):
    code = main(["solve", "--coefficient", "1", "--out", str(tmp_path)])
    assert code == 0
    data = json.loads((tmp_path / "solution.json").read_text())
    assert len(data) == 96
