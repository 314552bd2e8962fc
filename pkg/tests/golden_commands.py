"""CLI runs whose JSON/CSV outputs are frozen under tests/golden/.

Regenerate with ``PQSPEC_REGEN_GOLDEN=1 pytest tests/test_cli.py``.
"""
from pathlib import Path

DATA = Path(__file__).parent / "data"

# name -> (argv, files produced relative to the output directory)
COMMANDS = {
    "eigen_calibration": (["eigen", "--p", "2", "--q", "2", "--calibration", "--interval", "1",
                           "--k", "1..3", "--format", "json", "--output", "{out}/eigen_calibration.json"],
                          ["eigen_calibration.json"]),
    "eigen_verify": (["eigen", "--p", "3", "--q", "2", "--interval", "1", "--k", "1..5", "--verify",
                      "--format", "json", "--output", "{out}/eigen_verify.json"], ["eigen_verify.json"]),
    "eigen_disk": (["eigen", "--p", "2", "--q", "2", "--calibration", "--ball", "2", "1", "--k", "1",
                    "--verify", "--format", "csv", "--output", "{out}/eigen_disk.csv"], ["eigen_disk.csv"]),
    "combine": (["combine", "--p", "4", "--q", "2", "--spectra", str(DATA / "two_pieces.txt"),
                 "--select", "1,1", "--format", "json", "--output", "{out}/combine.json"], ["combine.json"]),
    "enumerate_json": (["enumerate", "--p", "3", "--q", "2", "--spectra", str(DATA / "three_pieces.json"),
                        "--cutoff", "100", "--format", "json", "--output", "{out}/enumerate.json"],
                       ["enumerate.json"]),
    "enumerate_csv": (["enumerate", "--p", "4", "--q", "2", "--spectra", str(DATA / "two_pieces.txt"),
                       "--format", "csv", "--output", "{out}/enumerate.csv"], ["enumerate.csv"]),
    "example_bi": (["example", "bi", "--p", "3", "--q", "2", "--L", "1", "0.25", "--k", "1..3", "--n", "50",
                    "--out", "{out}"], ["bi.json", "bi.csv"]),
    "example_bi_single": (["example", "bi", "--n", "1", "--out", "{out}", "--name", "bi_single"],
                          ["bi_single.json", "bi_single.csv"]),
    "example_tail": (["example", "tail", "--p", "3", "--q", "2", "--r0", "0.5", "--rho", "0.5", "--n", "30",
                      "--out", "{out}"], ["tail.json", "tail.csv"]),
}


def argv_for(name, out):
    argv, files = COMMANDS[name]
    return [a.replace("{out}", str(out)) for a in argv], files
