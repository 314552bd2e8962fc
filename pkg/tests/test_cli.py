import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from golden_commands import COMMANDS, DATA, argv_for
from pqspec.cli import main

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("PQSPEC_REGEN_GOLDEN") == "1"


def run(name, out):
    argv, files = argv_for(name, out)
    assert main(argv) == 0
    return {f: (Path(out) / f).read_bytes() for f in files}


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_golden(name, tmp_path):
    produced = run(name, tmp_path)
    for fname, data in produced.items():
        if REGEN:
            (GOLDEN / fname).write_bytes(data)
        assert data == (GOLDEN / fname).read_bytes(), fname


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_two_runs_identical(name, tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    a = run(name, tmp_path / "a")
    b = run(name, tmp_path / "b")
    assert a == b


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    (tmp_path / "one").mkdir()
    (tmp_path / "four").mkdir()
    one = run("example_bi", tmp_path / "one")
    monkeypatch.setenv("PQSPEC_THREADS", "4")
    four = run("example_bi", tmp_path / "four")
    assert one == four


def test_eigen_table(capsys):
    assert main(["eigen", "--p", "3", "--q", "2", "--interval", "1", "--k", "1..5"]) == 0
    out = capsys.readouterr().out
    assert out.count("lam =") == 5


def test_example_writes_svg(tmp_path):
    assert main(["example", "tail", "--n", "5", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "tail.svg").read_text().startswith("<svg")


def test_combine_values(tmp_path):
    out = tmp_path / "c.json"
    assert main(["combine", "--p", "3", "--q", "2", "--spectra", str(DATA / "three_pieces.json"),
                 "--select", "0,0,2", "--format", "json", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["value"] == 3.0


@pytest.mark.parametrize("argv", [
    ["eigen", "--p", "2", "--q", "3", "--interval", "1"],
    ["eigen", "--p", "3", "--q", "2", "--interval", "-1"],
    ["eigen", "--p", "3", "--q", "2", "--interval", "1", "--k", "0"],
    ["eigen", "--p", "3", "--q", "2"],
    ["combine", "--p", "3", "--q", "2", "--spectra", str(DATA / "two_pieces.txt"), "--select", "0,0"],
    ["combine", "--p", "3", "--q", "2", "--spectra", "missing.txt", "--select", "1,1"],
    ["combine", "--p", "3", "--q", "2", "--spectra", str(DATA / "two_pieces.txt"), "--select", "1"],
    ["example", "tail", "--radii", "0.5,0.25,0.2,0.18,0.17"],
    ["frobnicate"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_budget_exit_3(tmp_path, capsys):
    spec = tmp_path / "s.txt"
    spec.write_text("\n".join(" ".join(str(k) for k in range(1, 11)) for _ in range(4)))
    assert main(["enumerate", "--p", "3", "--q", "2", "--spectra", str(spec), "--budget", "10"]) == 3
    assert "numerical failure" in capsys.readouterr().err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "pqspec", "eigen", "--p", "2", "--q", "2", "--calibration",
                          "--interval", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and "9.8696044010893" in out.stdout
