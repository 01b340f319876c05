import json
import subprocess
import sys

import pytest

from lacunary.bohr import MultiPowerSeries
from lacunary.cli import main
from lacunary.semigroup import MembershipSieve
from lacunary.series import DirichletSeries
from oracles import mobius_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invert_zeta_gives_mobius(tmp_path, capsys):
    z = tmp_path / "z.json"
    assert run(capsys, "zeta-s", "--spec", "full", "--n", "100", "--out", str(z))[0] == 0
    code, out, _ = run(capsys, "invert", "--in", str(z))
    assert code == 0
    mu = DirichletSeries.from_json(json.loads(out))
    ref = mobius_table(100)
    assert all(mu[n] == ref[n] for n in range(1, 101))


def test_bezout(capsys):
    code, out, _ = run(capsys, "bezout", "--n", "1", "--gens", "2,3")
    assert code == 0
    obj = json.loads(out)
    assert obj["verification"]["ok"] is True
    assert obj["system"]["N"] == 6


def test_bezout_from_spec(capsys):
    code, out, _ = run(capsys, "bezout", "--n", "2", "--spec", "sum2sq")
    assert code == 0
    assert json.loads(out)["system"]["generators"] == [2, 5, 9, 13]


def test_closure_reports_violation(capsys):
    code, out, _ = run(capsys, "closure", "--spec", "{1,2,3}", "--n", "10")
    assert code == 0
    obj = json.loads(out)
    assert not obj["closed"] and [2, 3, 6] in obj["violations"]


def test_atoms_and_sieve_roundtrip(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "sieve", "--spec", "sum2sq", "--n", "50", "--out", str(path))
    sv = MembershipSieve.from_json(json.loads(path.read_text()))
    assert sv.to_json() == json.loads(path.read_text())
    code, out, _ = run(capsys, "atoms", "--in", str(path))
    assert code == 0 and json.loads(out)["atoms"][:4] == [2, 5, 9, 13]


def test_math_error_exit_1(tmp_path, capsys):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(DirichletSeries.monomial(2, 5).to_json()))
    code, out, err = run(capsys, "invert", "--in", str(path))
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "non_unit_constant_term"
    code, _, err = run(capsys, "atoms", "--spec", "set(1,2,3)", "--n", "10")
    assert code == 1 and json.loads(err)["error"] == "closure_violation"


def test_config_errors_exit_2(tmp_path, capsys):
    assert run(capsys, "invert", "--in", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "sieve", "--spec", "bogus(", "--n", "5")[0] == 2
    assert run(capsys, "sieve", "--spec", "full")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "norms", "--in", str(bad))[0] == 2


def test_resource_ceiling_env(monkeypatch, capsys):
    monkeypatch.setenv("LACUNARY_MAX_N", "100")
    code, _, err = run(capsys, "sieve", "--spec", "full", "--n", "101")
    assert code == 1 and json.loads(err)["error"] == "resource_limit"


def test_series_pipeline_roundtrips(tmp_path, capsys):
    z = tmp_path / "z.json"
    run(capsys, "lseries", "--m", "6", "--n", "60", "--out", str(z))
    f = DirichletSeries.from_json(json.loads(z.read_text()))
    assert all((f[n] == 0) == (n % 2 == 0 or n % 3 == 0) for n in range(1, 61))
    for argv in (
        ["conv", "--in", str(z), "--in", str(z)],
        ["invert", "--in", str(z)],
        ["fejer", "--in", str(z), "--m", "3"],
    ):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        obj = json.loads(out)
        assert DirichletSeries.from_json(obj).to_json() == obj


def test_lift_drop_homog(tmp_path, capsys):
    f = tmp_path / "f.json"
    f.write_text(json.dumps(DirichletSeries(10, {2: 1, 6: 1}).to_json()))
    p = tmp_path / "p.json"
    run(capsys, "lift", "--in", str(f), "--out", str(p))
    poly = json.loads(p.read_text())
    assert MultiPowerSeries.from_json(poly).to_json() == poly
    code, out, _ = run(capsys, "drop", "--in", str(p), "--n", "10")
    assert code == 0 and DirichletSeries.from_json(json.loads(out)) == DirichletSeries(10, {2: 1, 6: 1})
    code, out, _ = run(capsys, "homog", "--in", str(p))
    assert code == 0 and set(json.loads(out)["parts"]) == {"1", "2"}
    code, _, err = run(capsys, "drop", "--in", str(p), "--n", "5")
    assert code == 1 and json.loads(err)["error"] == "truncation_overflow"


def test_norms_eval_abscissa(tmp_path, capsys):
    z = tmp_path / "z.json"
    run(capsys, "zeta-s", "--spec", "full", "--n", "2000", "--backend", "float", "--out", str(z))
    code, out, _ = run(capsys, "norms", "--in", str(z), "--seed", "4", "--trials", "4")
    obj = json.loads(out)
    assert code == 0 and obj["chain_ok"] and obj["l1"] == 2000
    code, out, _ = run(capsys, "eval", "--in", str(z), "--sigma", "2,3", "--t", "0,1", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "sigma,t,abs_f" and len(lines) == 5
    code, out, _ = run(capsys, "abscissa", "--in", str(z))
    assert code == 0 and abs(json.loads(out)["sigma_c"]["value"] - 1) < 0.05


def test_csv_series_export(tmp_path, capsys):
    code, out, _ = run(capsys, "zeta-s", "--spec", "coprime(6)", "--n", "12", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n,abs_a_n", "1,1.0", "5,1.0", "7,1.0", "11,1.0"]


def test_deterministic_output(capsys, tmp_path):
    z = tmp_path / "z.json"
    run(capsys, "zeta-s", "--spec", "full", "--n", "300", "--out", str(z))
    outs = {run(capsys, "norms", "--in", str(z), "--seed", "9")[1] for _ in range(2)}
    assert len(outs) == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lacunary", "bezout", "--n", "1", "--gens", "2,3", "--format", "csv"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines() == ["ok", "True"]
