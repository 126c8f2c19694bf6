import json
import subprocess
import sys

import pytest

from cubicpoints.cli import dispatch, fit_points


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nq(capsys):
    code, out, _ = run(capsys, "nq", "--a", "1", "--q", "8", "--method", "both")
    assert code == 0
    assert json.loads(out) == {"a": 1, "q": 8, "brute": 4, "formula": 4}


def test_nq_nonunit_is_usage_error(capsys):
    code, _, err = run(capsys, "nq", "--a", "2", "--q", "8", "--method", "formula")
    assert code == 2 and "gcd" in err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--B", "1", "--method", "both")
    rec = json.loads(out)
    assert code == 0 and rec["count_direct"] == rec["count_torsor"] == 4


def test_count_guard(capsys):
    code, _, err = run(capsys, "count", "--B", "5000", "--method", "direct")
    assert code == 1 and "capped" in err


def test_unknown_flag(capsys):
    assert run(capsys, "count", "--B", "3", "--nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_constant(capsys):
    code, out, _ = run(capsys, "constant", "--prime-limit", "2", "--samples", "20000")
    rec = json.loads(out)
    assert rec["euler_product"] == 19 / 512
    assert (rec["alpha_num"], rec["alpha_den"]) == (1, 172800)


def test_points_csv(capsys, tmp_path):
    path = tmp_path / "p.csv"
    assert run(capsys, "points", "--B", "2", "--out", str(path))[0] == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "x0,x1,x2,x3" and len(lines) == 9


def test_sigma(capsys):
    code, out, _ = run(capsys, "sigma", "--r", "2", "--K", "1/2,1/2", "--Q", "2", "--Qlo", "1/2")
    rec = json.loads(out)
    assert code == 0 and rec["sigma"] == 2 and rec["main"] == 2


def test_threads_do_not_change_output(capsys):
    a = run(capsys, "count", "--B", "500", "--threads", "1")[1]
    b = run(capsys, "count", "--B", "500", "--threads", "3")[1]
    assert a == b


def test_deterministic_bytes(capsys):
    argv = ("constant", "--prime-limit", "1000", "--samples", "50000", "--seed", "7")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_fit_points():
    assert fit_points(1000, 10**6, 4) == [1000, 10_000, 100_000, 1_000_000]
    with pytest.raises(ValueError):
        fit_points(10, 5, 3)


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "2", "c04")
    recs = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and [r["criterion"] for r in recs] == ["c02_two_adic_table", "c04_height_one"]
    assert run(capsys, "verify", "99")[0] == 2


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "cubicpoints.cli", "nq", "--a", "-1", "--q", "5"], capture_output=True, text=True
    )
    assert out.returncode == 0 and json.loads(out.stdout)["formula"] == 2
