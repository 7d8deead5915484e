import subprocess
import sys

import pytest

from toomlab.cli import main
from toomlab.patterns import parse_cutspec, parse_pattern

SEG5 = "space: plane\nooooo\n"
CUT = "C: 2,0 2,1\nA1: 0,0 1,0 0,1 1,1\nA2: 3,0 4,0 5,0 3,1 4,1\n"


@pytest.fixture
def seg5(tmp_path):
    path = tmp_path / "seg5.toom"
    path.write_text(SEG5)
    return path


def test_evolve_writes_pattern(seg5, tmp_path):
    out = tmp_path / "out.toom"
    assert main(["evolve", "--rule", "rplus", "--steps", "1", str(seg5), "-o", str(out)]) == 0
    assert set(parse_pattern(out.read_text())) == {(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)}


def test_evolve_with_failures(tmp_path, capsys):
    pat = tmp_path / "p.toom"
    pat.write_text("space: plane\noo\n")
    fail = tmp_path / "f.txt"
    fail.write_text("1 5 5 1\n")
    assert main(["evolve", "--rule", "r", "--steps", "1", "--failures", str(fail), str(pat)]) == 0
    assert sorted(parse_pattern(capsys.readouterr().out)) == [(0, 0), (5, 5)]


def test_render(seg5, capsys):
    assert main(["render", str(seg5)]) == 0
    assert "ooooo" in capsys.readouterr().out


def test_span(seg5, capsys):
    assert main(["span", "--d", "2", str(seg5)]) == 0
    assert main(["span", "--d", "1/3", str(seg5)]) == 0
    assert capsys.readouterr().out.split() == ["10", "5"]


def test_thickness(seg5, capsys):
    assert main(["thickness", "--alpha", "6", str(seg5)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "1" and "C: " in out
    assert main(["thickness", "--connected", "--alpha", "6", "--beta", "2", str(seg5)]) == 0
    assert capsys.readouterr().out.strip() == "inf"


def test_pullback_q(seg5, tmp_path, capsys):
    cut = tmp_path / "cut.txt"
    cut.write_text(CUT)
    assert main(["pullback", "q", "--cut", str(cut), str(seg5)]) == 0
    body = "".join(l + "\n" for l in capsys.readouterr().out.splitlines() if not l.startswith("#"))
    assert len(parse_cutspec(body).C) == 1


def test_pullback_r(seg5, tmp_path, capsys):
    cut = tmp_path / "cut.txt"
    cut.write_text("C: 2,0\nA1: 0,0 1,0\nA2: 3,0\n")
    assert main(["pullback", "r", "--cut", str(cut), str(seg5)]) == 0
    assert "# 2,0 -> " in capsys.readouterr().out


def test_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.toom"
    bad.write_text("ooo\n")
    assert main(["render", str(bad)]) == 2
    assert main(["render", str(tmp_path / "missing.toom")]) == 2
    assert "toomlab: error" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["verify", "nope"])


def test_verify_exit_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["verify", "commute", "--trials", "20", "--seed", "4"]
    assert main(args + ["-o", str(a)]) == 0
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_consensus_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["consensus", "--sizes", "8", "--trials", "2", "--densities", "0.5", "--seed", "1"]
    assert main(args + ["-o", str(a)]) == 0
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "n,trial,seed,density,steps,outcome"


def test_console_script_module(seg5):
    res = subprocess.run([sys.executable, "-m", "toomlab.cli", "span", "--d", "2", str(seg5)],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "10"
