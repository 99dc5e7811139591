import json
import subprocess
import sys
from pathlib import Path

import pytest

SPEC = """\
arity: 1
domain: [0,1]
expr: x
expr: x^2
algebraic_locus: unknown
"""


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "dioapprox", *args],
                          capture_output=True, text=True)


@pytest.fixture()
def spec_file(tmp_path):
    path = tmp_path / "parabola.set"
    path.write_text(SPEC)
    return path


def _body(path: Path) -> bytes:
    lines = [ln for ln in path.read_text().splitlines()
             if not ln.startswith("#")]
    return ("\n".join(lines)).encode()


def test_count_csv_schema(spec_file, tmp_path):
    out = tmp_path / "count.csv"
    res = run_cli("count", "--spec", str(spec_file), "--T", "4,8",
                  "--lambda", "6", "--out", str(out))
    assert res.returncode == 0, res.stderr
    lines = [ln for ln in out.read_text().splitlines()
             if not ln.startswith("#")]
    assert lines[0] == "T,lambda,e,N,undecided,seconds"
    assert len(lines) == 3
    assert lines[1].split(",")[0] == "4"


def test_determinism_byte_identical_bodies(spec_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        res = run_cli("count", "--spec", str(spec_file), "--T", "4,8,10",
                      "--lambda", "6", "--out", str(out))
        assert res.returncode == 0, res.stderr
    assert _body(a) == _body(b)


def test_rootsum_csv(tmp_path):
    out = tmp_path / "root.csv"
    res = run_cli("rootsum", "--coeffs", "1,1", "--N", "primes:5..13",
                  "--out", str(out))
    assert res.returncode == 0, res.stderr
    lines = [ln for ln in out.read_text().splitlines()
             if not ln.startswith("#")]
    assert lines[0] == "N,n,value_lo,value_hi,argmin,zeros_found,seconds"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["5", "7", "11", "13"]


def test_rootsum_determinism(tmp_path):
    bodies = []
    for name in ("r1.csv", "r2.csv"):
        out = tmp_path / name
        res = run_cli("rootsum", "--coeffs", "1,1,1", "--N", "primes:5..23",
                      "--out", str(out))
        assert res.returncode == 0, res.stderr
        bodies.append(_body(out))
    assert bodies[0] == bodies[1]


def test_examples_json(tmp_path):
    res = run_cli("examples", "--name", "1.5", "--T", "1000",
                  "--lambda", "2", "--json", "-")
    assert res.returncode == 0, res.stderr
    doc = json.loads(res.stdout)
    assert doc["schema"] == "v1"
    assert doc["results"]["count"] >= 499


def test_exit_code_validation_error():
    res = run_cli("count", "--spec", "/nonexistent.set", "--T", "4",
                  "--lambda", "2")
    assert res.returncode == 1
    assert "error:" in res.stderr


def test_exit_code_budget(tmp_path):
    res = run_cli("rootsum", "--coeffs", "1,1,1,1", "--N", "400",
                  "--budget", "10", "--out", str(tmp_path / "x.csv"))
    assert res.returncode == 2


def test_enumerate_output(tmp_path):
    out = tmp_path / "enum.csv"
    res = run_cli("enumerate", "--T", "5", "--window", "0,1",
                  "--out", str(out))
    assert res.returncode == 0
    lines = [ln for ln in out.read_text().splitlines()
             if not ln.startswith("#")]
    assert len(lines) == 12  # header + 11 fractions
    assert "# count: 11" in out.read_text()


def test_config_file_with_flag_override(spec_file, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("lam = 6\ne = 1\n")
    out = tmp_path / "c.csv"
    res = run_cli("--config", str(cfg), "count", "--spec", str(spec_file),
                  "--T", "4", "--out", str(out))
    assert res.returncode == 0, res.stderr
    body = _body(out).decode()
    assert body.splitlines()[1].split(",")[1] == "6"
    # now the flag wins over the config value
    res2 = run_cli("--config", str(cfg), "count", "--spec", str(spec_file),
                   "--T", "4", "--lambda", "8", "--out", str(out))
    assert res2.returncode == 0
    assert _body(out).decode().splitlines()[1].split(",")[1] == "8"


def test_heights_cli():
    res = run_cli("heights", "--rational", "1/2,7/3", "--json", "-")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["results"][0]["height"] == "2"
    assert doc["results"][1]["height"] == "7"


def test_auxpoly_cli(tmp_path, spec_file):
    out = tmp_path / "aux.csv"
    res = run_cli("auxpoly", "--spec", str(spec_file), "--T", "10",
                  "--d", "2", "--b", "3", "--c-prime", "1/2",
                  "--out", str(out), "--json", str(tmp_path / "aux.json"))
    assert res.returncode == 0, res.stderr
    doc = json.loads((tmp_path / "aux.json").read_text())
    assert doc["results"]["all_sup_certified"] is True


def test_fit_cli(tmp_path):
    csv = tmp_path / "growth.csv"
    rows = ["T,lambda,e,N,undecided,seconds"]
    for t in (4, 8, 16, 32):
        rows.append(f"{t},1,1,{t * t},0,")
    csv.write_text("\n".join(rows) + "\n")
    res = run_cli("fit", "--input", str(csv), "--json", "-")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert abs(doc["results"]["slope"] - 2.0) < 1e-9
