import json
import subprocess
import sys
from pathlib import Path

import pytest

from cohomseries.cli import GRAMMAR, cli_main

VARIETIES = Path(__file__).resolve().parent.parent / "varieties"


def run(capsys, *argv):
    code = cli_main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_line(capsys):
    code, out, _ = run(capsys, "expand", "--expr", "(1-t^5)/((1-t)^5)", "--plan", "t1=0", "--window", "t1=0..4")
    assert code == 0 and out == "1 5 15 35 70\n"


def test_expand_grid_and_csv(capsys):
    args = ["expand", "--expr", "1/((1-t1^-1*t2^4))", "--plan", "t2=0,t1=0", "--window", "t1=-2..0,t2=0..8"]
    code, out, _ = run(capsys, *args, "--format", "csv")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "m1,m2,h"
    nz = {r for r in rows[1:] if not r.endswith(",0")}
    assert nz == {"0,0,1", "-1,4,1", "-2,8,1"}
    code, out, _ = run(capsys, *args)
    assert code == 0 and out.splitlines()[0].split("|")[0].strip() == "8"


def test_expand_with_filter(capsys):
    code, out, _ = run(capsys, "expand", "--expr", "1/((1-t1)*(1-t2))", "--plan", "t1=0,t2=0",
                       "--window", "t1=0..2,t2=0..2", "--filter", "t1+t2<=1", "--format", "csv")
    assert code == 0
    assert [r for r in out.splitlines()[1:] if r.endswith(",1")] == ["0,0,1", "0,1,1", "1,0,1"]


def test_chi(capsys):
    code, out, _ = run(capsys, "chi", "--variety", str(VARIETIES / "quintic.json"), "--bundle", "1")
    assert (code, out) == (0, "5\n")
    code, out, _ = run(capsys, "chi", "--variety", str(VARIETIES / "h24.json"), "--bundle", "1,1")
    assert (code, out) == (0, "8\n")


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--variety", str(VARIETIES / "bicubic.json"), "--bundle", "3,-1")
    assert (code, out) == (0, "0 3 0 0\n")


def test_oracle_indeterminate_exit(capsys, monkeypatch):
    import cohomseries.cli as cli
    from cohomseries.oracle import koszul_cohomology

    monkeypatch.setattr(cli, "koszul_cohomology", lambda *a: koszul_cohomology(*a, max_entries=1, shortcuts=False))
    code, out, _ = run(capsys, "oracle", "--variety", str(VARIETIES / "bicubic.json"), "--bundle", "4,-3")
    assert code == 3 and ".." in out


def test_hs(capsys):
    code, out, _ = run(capsys, "hs", "--variety", str(VARIETIES / "quintic.json"))
    assert (code, out) == (0, "(1-t^5)/((1-t)^5)\n")
    code, out, _ = run(capsys, "hs", "--catalog", "hirzebruch:1")
    assert code == 0 and out.count("CS^") == 3
    code, out, _ = run(capsys, "hs", "--catalog", "cicy7644:signed")
    assert code == 0 and "sum_{n=" in out


def test_euler(capsys):
    code, out, _ = run(capsys, "euler", "--variety", str(VARIETIES / "bicubic.json"), "--window", "t1=-5..5,t2=-5..5")
    assert code == 0 and out.startswith("Verified")


def test_verify_ok(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--entry", "hirzebruch:2", "--window", "t1=-6..6,t2=-6..6",
                       "--report", str(rep))
    assert code == 0
    assert json.loads(rep.read_text())["status"] == "Verified"


def test_verify_mismatch_exit(capsys):
    code, out, _ = run(capsys, "verify", "--entry", "cicy7885", "--window", "t1=-2..2,t2=-2..2", "--seeds", "1")
    assert code == 2 and "Mismatch" in out


def test_verify_family_error_exit(capsys):
    code, out, _ = run(capsys, "verify", "--entry", "cicy7644", "--window", "t1=-1..1,t2=-1..1", "--seeds", "1")
    assert code == 2 and "error: degree 0" in out


def test_figure(capsys):
    code, out, _ = run(capsys, "figure", "--entry", "bicubic", "--coh", "0", "--range", "t1=0..1,t2=0..1",
                       "--format", "csv")
    assert (code, out) == (0, "m1,m2,h\n0,0,1\n0,1,3\n1,0,3\n1,1,9\n")


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["expand", "--expr", "1/(1-t", "--plan", "t1=0", "--window", "t1=0..2"],
    ["expand", "--expr", "1", "--plan", "t1=2", "--window", "t1=0..2"],
    ["expand", "--expr", "1", "--plan", "t1=0", "--window", "t1=3..2"],
    ["chi", "--variety", str(VARIETIES / "quintic.json"), "--bundle", "1,2"],
    ["chi", "--variety", "/nonexistent.json", "--bundle", "1"],
    ["verify", "--entry", "nope", "--window", "t1=0..1,t2=0..1"],
    ["oracle", "--variety", str(VARIETIES / "hirzebruch1.json"), "--bundle", "1,1"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert "error:" in err and GRAMMAR.splitlines()[0] in err


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "cohomseries", "chi", "--variety", str(VARIETIES / "quintic.json"),
                        "--bundle", "2"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout == "15\n"
