import json
import subprocess
import sys
from pathlib import Path

import pytest

from qconvex.betti_engine import Status
from qconvex.cli import main
from qconvex.errors import ScenarioParseError, ScenarioValidationError
from qconvex.reports import (
    Report,
    certificate_from_dict,
    certificate_to_dict,
    parse_report,
    parse_scenario,
    render,
    run_scenario,
)

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"

TORUS = {"n": 4, "q": 2, "p": 1, "ambient": {"c": 1.0}, "points": [{"curvatures": [-1, 1, 1, 1]}]}


def test_torus_scenario_report():
    rep = run_scenario(dict(TORUS))
    cert = rep.certificate
    assert cert[1].status is Status.BOUNDED_BINOMIAL and cert[1].binomial == 4 and cert[1].rigid
    assert rep.data["points"][0]["H"] == pytest.approx(0.5)
    assert rep.tolerance == 1e-10
    assert any("rigidity" in n for n in cert.notes)


def test_scenario_files():
    cert = run_scenario(SCENARIOS / "strict_vanishing.json").certificate
    assert [cert[i].status for i in (2, 3, 4)] == [Status.VANISHES] * 3
    cert = run_scenario(SCENARIOS / "homology_sphere.json").certificate
    assert cert.c == pytest.approx(0.5)
    assert [cert[i].status for i in (1, 2, 3)] == [Status.VANISHES] * 3
    cert = run_scenario(SCENARIOS / "torus_boundary.json").certificate
    assert cert[1].rigid


@pytest.mark.parametrize(
    "patch,where",
    [
        ({"points": [{"curvatures": [1, 1, 1]}]}, "points"),
        ({"extra": 1}, "extra"),
        ({"ambient": {"c": 1, "eigenvalues": [1]}}, "ambient"),
        ({"q": 4}, "q"),
        ({"p": 3}, "p"),
        ({"ambient": {"eigenvalues": [1.0] * 9}}, "eigenvalues"),
        ({"ambient": {"eigenvalues": [2.0] + [1.0] * 9}}, "sorted"),
        ({"diameter": -1}, "diameter"),
    ],
)
def test_parse_errors_name_the_field(patch, where):
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario(dict(TORUS, **patch))
    assert where in str(info.value)


def test_bad_json_and_missing_file(tmp_path):
    with pytest.raises(ScenarioParseError):
        parse_scenario("{not json")
    with pytest.raises(ScenarioParseError):
        parse_scenario(tmp_path / "absent.json")
    with pytest.raises(ScenarioParseError):
        parse_scenario('{"n": NaN}')


def test_validation_error_reports_point():
    bad = dict(TORUS, points=[{"curvatures": [1, 1, 1, 1]}, {"curvatures": [-3, 1, 1, 1]}])
    with pytest.raises(ScenarioValidationError) as info:
        parse_scenario(bad)
    assert info.value.point_index == 1
    assert info.value.margin == pytest.approx(-2)


def test_structured_round_trip():
    for name in ("strict_vanishing", "homology_sphere", "torus_boundary", "negative_ambient"):
        rep = run_scenario(SCENARIOS / f"{name}.json")
        text = render(rep)
        again = parse_report(text)
        assert again == rep
        assert render(again) == text
        assert certificate_to_dict(again.certificate) == rep.data["certificate"]


def test_certificate_dict_round_trip():
    cert = run_scenario(SCENARIOS / "negative_ambient.json").certificate
    assert certificate_from_dict(certificate_to_dict(cert)) == cert


def test_report_rejects_unknown_fields_and_versions():
    rep = json.loads(render(Report("sweep", {"x": 1}, tolerance=0.1)))
    with pytest.raises(ScenarioParseError):
        parse_report(json.dumps(dict(rep, surprise=True)))
    with pytest.raises(ScenarioParseError):
        parse_report(json.dumps(dict(rep, schema_version=99)))


def test_text_render_mentions_every_degree():
    text = render(run_scenario(dict(TORUS)), "text")
    for i in range(5):
        assert f"b_{i}:" in text
    assert "[rigid]" in text and "tolerance 1e-10" in text


@pytest.mark.parametrize(
    "name,code", [("strict_vanishing", 0), ("homology_sphere", 0), ("torus_boundary", 0),
                  ("negative_ambient", 0), ("malformed", 3), ("not_convex", 2)]
)
def test_certify_exit_codes(name, code, capsys):
    assert main(["certify", str(SCENARIOS / f"{name}.json")]) == code


def test_out_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["certify", str(SCENARIOS / "torus_boundary.json"), "--format", "structured", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert parse_report(out.read_text()).certificate[1].rigid


def test_torus_scan_command(capsys):
    assert main(["torus-scan", "--n", "4", "--p", "1", "--q", "2", "--format", "structured", "--grid", "5"]) == 0
    rows = json.loads(capsys.readouterr().out)["data"]["rows"]
    assert len(rows) == 5 and rows[0]["rigidity"] == "boundary_rigid"
    assert main(["torus-scan", "--n", "4", "--p", "2", "--q", "2", "--r", "0.9"]) == 2


def test_spectrum_command(capsys):
    assert main(["spectrum", "--k=-1,1,1,1", "--p", "1", "--q", "2", "--seed", "3", "--format", "structured"]) == 0
    data = json.loads(capsys.readouterr().out)["data"]
    assert data["match"] and data["tmin"] == -3 and data["tmin_bound"] == pytest.approx(-3)
    assert data["rigidity"] == "boundary_rigid"


def test_sweep_command(capsys):
    assert main(["sweep", "--suite", "tmin_bound", "--samples", "50", "--format", "structured"]) == 0
    data = json.loads(capsys.readouterr().out)["data"]
    assert data["failed"] == 0 and data["seed"] == 42


def test_unknown_suite_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["sweep", "--suite", "nope"])
    assert info.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qconvex", "certify", str(SCENARIOS / "malformed.json")],
                         capture_output=True, text=True)
    assert res.returncode == 3 and "parse error" in res.stderr
