import json

import pytest

from otikit import cli


def run_json(args, tmp_path, env=None):
    out = tmp_path / "cert.json"
    code = cli.run(args + ["--out", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8"))


def test_fuse_prints_decomposition(capsys):
    assert cli.run(["fuse", "--p", "5", "--i", "3", "--j", "3"]) == 0
    assert capsys.readouterr().out.strip() == "L3 ⊕ L1"


def test_perm_decomp_example(tmp_path):
    code, cert = run_json(["perm-decomp", "--p", "2", "--r", "1", "--n", "4", "--lambda", "2,2"], tmp_path)
    assert code == 0
    (rep,) = cert["reports"]
    assert rep["verdict"] == "PASS" and rep["data"]["predicted"] == [[2], [2]]


def test_exit_codes(tmp_path, capsys):
    code, cert = run_json(["hom-check", "--p", "2", "--r", "2", "--lambda", "5,3", "--mu", "6,2"], tmp_path)
    assert code == 2 and cert["summary"]["SKIP"] == 1
    assert cli.run(["fuse", "--p", "4", "--i", "1", "--j", "1"]) == 64
    assert cli.run(["fuse", "--p", "5", "--i", "5", "--j", "1"]) == 64
    assert cli.run(["nonsense"]) == 64
    assert cli.run([]) == 64
    assert cli.run(["perm-decomp", "--p", "2", "--lambda", "3,4"]) == 64
    assert cli.run(["oti-perm", "--p", "2", "--r", "2", "--lambda", "2,1"]) == 64
    assert cli.run(["glauberman", "--example", "nope"]) == 64
    assert "usage error" in capsys.readouterr().err


def test_refutation_exit_code(tmp_path, monkeypatch):
    from otikit.oti import FAIL, Report
    monkeypatch.setattr(cli, "k0_residue_check", lambda lam, p: Report("k0-check", {}, FAIL))
    code, cert = run_json(["k0-check", "--p", "2", "--lambda", "2,2"], tmp_path)
    assert code == 1 and cert["exit_code"] == 1


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("OTI_SEED", "7")
    _, cert = run_json(["ss", "--p", "3", "--jordan", "3,2,1"], tmp_path)
    assert cert["config"]["params"]["seed"] == 7
    assert cert["reports"][0]["data"]["jordan_type"] == [3, 2, 1]
    assert cert["reports"][0]["data"]["ver_object"] == "L1 ⊕ L2"
    monkeypatch.setenv("OTI_SEED", "x")
    assert cli.run(["ss", "--p", "3", "--jordan", "1"]) == 64


def test_certificate_reproduces(tmp_path):
    args = ["cf-vanish", "--p", "2", "--r", "2", "--modules", "3", "--transfers", "4", "--seed", "3"]
    _, first = run_json(args, tmp_path)
    _, second = run_json(first["config"]["argv"], tmp_path)
    first.pop("timing"), second.pop("timing")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_grid_with_jobs_matches_serial(tmp_path):
    base = ["quasistable-check", "--p", "2", "--r", "1", "--n", "6"]
    _, serial = run_json(base, tmp_path)
    _, par = run_json(["hom-check", "--p", "2", "--r", "2", "--n", "8", "--jobs", "2"], tmp_path)
    assert serial["summary"]["PASS"] == 11
    assert par["summary"]["PASS"] == 16


@pytest.mark.parametrize("args", [
    ["oti-perm", "--p", "2", "--r", "2", "--lambda", "5,3", "--tuple", "1,2"],
    ["k0-check", "--p", "3", "--n", "4"],
    ["branch-check", "--p", "2", "--r", "2", "--lambda", "6,2", "--module", "S"],
    ["glauberman"],
    ["commute-f", "--p", "2", "--r", "1", "--lambda", "3,1"],
    ["theorem-a", "--p", "3", "--r", "1", "--lambda", "6,1"],
    ["ss", "--p", "3", "--lambda", "3,1", "--module", "S"],
])
def test_commands_pass(args, tmp_path):
    code, cert = run_json(args, tmp_path)
    assert code == 0 and cert["summary"]["FAIL"] == 0


def test_csv_projection(tmp_path):
    path = tmp_path / "rows.csv"
    cli.run(["k0-check", "--p", "2", "--n", "3", "--csv", str(path), "--out", str(tmp_path / "c.json")])
    rows = path.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "check,params,verdict" and len(rows) == 4


def test_acceptance_subset(tmp_path):
    code, cert = run_json(["acceptance", "--only", "1,9"], tmp_path)
    assert code == 0
    assert [r["check"] for r in cert["reports"]] == ["criterion-1", "criterion-9", "operation-examples"]
