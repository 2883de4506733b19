import json
import subprocess
import sys

import pytest

from bilex.catalog import load_catalog, parse_catalog
from bilex.cli import main
from bilex.errors import ParameterError
from bilex.extract import ExtractorKind

from test_audit import REPORT_KEYS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_shipped_catalog_loads_and_validates(catalog):
    assert len(catalog) >= 12
    e = catalog["fp-1009-k2"]
    assert (e.p, e.q1, e.q2, e.k) == (1009, 504, 504, 2)
    assert e.spec.kind is ExtractorKind.FP_LSB
    assert catalog["fpn-16-k1"].field.size == 16
    with pytest.raises(KeyError):
        catalog["nope"]


def test_catalog_validation_errors():
    with pytest.raises(ParameterError):
        parse_catalog([{"name": "x", "kind": "fp_lsb", "p": 12, "k": 1, "q1": 1, "q2": 1}])
    with pytest.raises(ParameterError):
        parse_catalog([{"name": "x", "kind": "fp_lsb", "p": 11, "k": 1, "q1": 3, "q2": 1}])
    with pytest.raises(ParameterError):
        parse_catalog([{"name": "x", "kind": "fp_lsb"}])
    dup = {"name": "x", "kind": "fp_lsb", "p": 11, "k": 1, "q1": 1, "q2": 1}
    with pytest.raises(ParameterError):
        parse_catalog([dup, dup])


def test_env_var_selects_catalog(tmp_path, monkeypatch):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"entries": [
        {"name": "tiny", "kind": "fp_lsb", "p": 11, "k": 1, "q1": 5, "q2": 2}]}))
    monkeypatch.setenv("BILEX_CATALOG", str(path))
    assert load_catalog().names() == ["tiny"]


def test_extract_command(capsys):
    code, out, _ = run(capsys, "extract", "--entry", "fp-11-demo", "--x1", "4", "--x2", "10")
    assert code == 0
    d = json.loads(out)
    assert d["value"] == 3 and d["symbol"] == "11" and d["k"] == 2
    code, out, _ = run(capsys, "extract", "--entry", "fp-11-demo", "--x1", "4", "--x2", "10", "--k", "1")
    assert json.loads(out)["value"] == 1


@pytest.mark.parametrize("x1,needle", [("4x", "cannot parse"), ("2", "not in its source subgroup"),
                                       ("11", "canonical residue")])
def test_extract_bad_input_exits_2(capsys, x1, needle):
    code, out, err = run(capsys, "extract", "--entry", "fp-11-demo", "--x1", x1, "--x2", "10")
    assert code == 2 and out == "" and needle in err


def test_extract_on_curves(capsys):
    code, out, _ = run(capsys, "extract", "--entry", "ec-5-k2", "--x1", "2,1", "--x2", "4/2")
    # [DERIVED] 2*4 = 8 = 3 mod 5 -> bits 11
    assert code == 0 and json.loads(out)["value"] == 3
    code, _, err = run(capsys, "extract", "--entry", "ec-5-k2", "--x1", "1,1", "--x2", "4/2")
    assert code == 2 and "not on" in err


def test_audit_single_entry(capsys, tmp_path):
    code, out, _ = run(capsys, "audit", "--entry", "fp-1009-k2")
    d = json.loads(out)
    assert code == 0 and list(d) == REPORT_KEYS
    assert d["sd"] <= d["bound"] and d["status"] == "pass"
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "audit", "--entry", "fp-1009-k2", "--out", str(target))
    assert out == "" and json.loads(target.read_text()) == d


def test_audit_all_exit_code_tracks_statuses(capsys):
    code, out, _ = run(capsys, "audit", "--all")
    reports = json.loads(out)
    assert [r["params"]["entry"] for r in reports] == load_catalog().names()
    statuses = {r["params"]["entry"]: r["status"] for r in reports}
    assert set(statuses.values()) <= {"pass", "vacuous", "fail"}
    assert code == (4 if "fail" in statuses.values() else 0)


def test_audit_empty_catalog(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text('{"entries": []}')
    code, out, _ = run(capsys, "--catalog", str(path), "audit", "--all")
    assert code == 0 and json.loads(out) == []


def test_audit_capacity_exit_3(capsys):
    code, _, err = run(capsys, "audit", "--entry", "fp-1009-k2", "--pair-cap", "100")
    assert code == 3 and "capacity" in err


def test_charsum_commands(capsys):
    code, out, _ = run(capsys, "charsum", "--entry", "fp-11-demo", "--check", "pv")
    d = json.loads(out)
    assert code == 0 and d["passed"] and d["cap"] == pytest.approx(11**0.5)
    code, out, _ = run(capsys, "charsum", "--entry", "fpn-4-demo", "--check", "winterhof")
    d = json.loads(out)
    assert d["value"] == 4 and d["cap"] == 4 and d["passed"]
    code, out, _ = run(capsys, "charsum", "--entry", "fp-1009-k2", "--check", "bilinear")
    assert json.loads(out)["passed"]
    code, out, _ = run(capsys, "charsum", "--entry", "fpn-16-k1", "--check", "winterhof", "--all-subspaces")
    d = json.loads(out)
    assert d["subspaces"] == 67 and d["always_equal"]


def test_charsum_unknown_check_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["charsum", "--entry", "fp-11-demo", "--check", "bogus"])
    assert exc.value.code == 2


def test_unknown_entry_exits_2(capsys):
    code, _, err = run(capsys, "audit", "--entry", "missing")
    assert code == 2 and "missing" in err


def test_module_entry_point_runs():
    res = subprocess.run([sys.executable, "-m", "bilex", "list"], capture_output=True, text=True, check=True)
    assert "fp-11-demo" in res.stdout
