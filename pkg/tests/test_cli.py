import io
import subprocess
import sys

import pytest

from rummikub.cli import main

from conftest import SAMPLE


def run(argv, stdin_text=None, monkeypatch=None):
    out = io.StringIO()
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def sample_file(tmp_path):
    path = tmp_path / "sample_file.txt"
    path.write_text(SAMPLE)
    return str(path)


def test_solve_sample_hand(sample_file):
    code, text = run(["solve", sample_file])
    assert code == 0
    assert text.splitlines() == ["score 39", "RUN suit=1 start=6 len=4 jokers=-",
                                 "GROUP value=3 suits=1,2,3 jokers=0", "unused -"]


def test_solve_empty_and_unused(tmp_path, monkeypatch):
    code, text = run(["solve", "-"], "params n=13 k=4 m=2 j=2\nhand\n", monkeypatch)
    assert code == 0 and text.splitlines() == ["score 0", "unused -"]
    code, text = run(["solve", "-", "--penalty"], "params n=13 k=4 m=2 j=2\nhand 1:1 J\n",
                     monkeypatch)
    assert text.splitlines() == ["score 0", "unused 1:1 J", "joker-penalty 25"]


def test_solve_infeasible(monkeypatch):
    code, text = run(["solve", "-"], "params n=13 k=4 m=2 j=0\nhand\ntable 5:1 5:2\n",
                     monkeypatch)
    assert code == 2 and "table constraint unsatisfiable" in text


def test_bad_input(monkeypatch, capsys):
    code, _ = run(["solve", "-"], "params n=13 k=4 m=2 j=0\nhand 6:9\n", monkeypatch)
    assert code == 1
    assert "line 2" in capsys.readouterr().err
    code, _ = run(["solve", "/nonexistent/problem.txt"])
    assert code == 1


def test_params_override(sample_file):
    code, text = run(["solve", sample_file, "--params", "n=20,j=1"])
    assert code == 0 and text.startswith("score 39")
    assert run(["solve", sample_file, "--params", "n=5"])[0] == 1


def test_check(sample_file, monkeypatch):
    code, text = run(["check", sample_file])
    assert code == 0
    assert text.splitlines() == ["score 39", "verified ok", "fully-playable true"]
    code, text = run(["check", "-"], "params n=13 k=4 m=2 j=1\nhand 6:1 7:1 J 2:2\n", monkeypatch)
    assert text.splitlines()[-1] == "fully-playable false"


def test_oracle(sample_file, monkeypatch):
    assert run(["oracle", sample_file]) == (0, "dp 39\noracle 39\n")
    big = "params n=13 k=4 m=2 j=0\nhand " + " ".join(f"{v}:1 {v}:2" for v in range(1, 14)) + "\n"
    code, text = run(["oracle", "-"], big, monkeypatch)
    assert code == 3 and "budget" in text


def test_count_rows():
    assert run(["count", "--t-from", "14", "--t-to", "14"]) == \
        (0, "t,total,winning,ratio\n14,37418772170780,,\n")
    assert run(["winning", "--params", "n=6,k=4,m=2", "--t-from", "48", "--t-to", "48"]) == \
        (0, "t,total,winning,ratio\n48,1,1,1.00e0\n")
    assert run(["winning", "--params", "n=3,k=3,m=1", "--t-from", "3", "--t-to", "3"]) == \
        (0, "t,total,winning,ratio\n3,84,6,7.14e-2\n")
    assert run(["winning", "--params", "n=3,k=3,m=1", "--t-from", "3", "--t-to", "3",
                "--method", "partition", "--threads", "2"])[1].endswith("3,84,6,7.14e-2\n")


def test_count_errors_and_output_file(tmp_path, capsys):
    assert run(["count", "--t-from", "9", "--t-to", "3"])[0] == 1
    assert run(["winning", "--params", "n=4,k=3,m=2", "--t-from", "3", "--t-to", "9",
                "--method", "partition", "--max-keys", "20"])[0] == 5
    assert "last completed t=5" in capsys.readouterr().err
    out = tmp_path / "rows.csv"
    assert run(["count", "--params", "n=2,k=2,m=1", "--out", str(out)]) == (0, "")
    assert out.read_text().splitlines()[3] == "2,6,,"


def test_module_entry_point(sample_file):
    proc = subprocess.run([sys.executable, "-m", "rummikub", "solve", sample_file],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("score 39\n")


def test_deterministic_output(sample_file):
    assert run(["solve", sample_file]) == run(["solve", sample_file])
