from __future__ import annotations

import json
import subprocess
import sys

import pytest

from sqtiled import cli, formulas


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_table_csv(capsys):
    code, out, _ = run(["table", "--n-min", "4", "--n-max", "7"], capsys)
    assert code == 0
    assert out.splitlines() == [
        "n,A,B,C,D,E",
        "4,0,3,1,0,4",
        "5,5,11,6,2,24",
        "6,6,30,12,0,48",
        "7,35,73,40,12,160",
    ]


def test_table_json_lines(capsys):
    code, out, _ = run(["table", "--n-min", "4", "--n-max", "5", "--format", "json"], capsys)
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows[0]["n"] == 4 and rows[0]["B"] == 3 and rows[0]["rB"] == [3, 4]
    assert rows[1]["E"] == 24


def test_table_default_range_reaches_5000(tmp_path):
    out = tmp_path / "t.csv"
    assert cli.main(["table", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1].startswith("4,") and lines[-1].startswith("5000,")


def test_densities_rows(capsys):
    code, out, _ = run(["densities", "--n-min", "4", "--n-max", "5"], capsys)
    assert code == 0
    assert out.splitlines() == ["n,rA,rB,rC,rD", "4,0.0,0.75,0.25,0.0", "5,0.20833333333333334,0.4583333333333333,0.25,0.08333333333333333"]


def test_densities_json(capsys):
    code, out, _ = run(["densities", "--n-min", "6", "--n-max", "6", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out) == {"n": 6, "rA": 0.125, "rB": 0.625, "rC": 0.25, "rD": 0.0}


def test_output_is_byte_deterministic_with_lf(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["densities", "--n-max", "60", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()
    assert a.read_bytes().endswith(b"\n")


@pytest.mark.parametrize(
    "argv",
    [
        ["table", "--n-min", "3"],
        ["table", "--n-min", "10", "--n-max", "9"],
        ["table", "--n-max", "10001"],
        ["densities", "--n-min", "2"],
        ["bruteforce", "--n", "3"],
        ["bruteforce", "--n", "9"],
        ["bruteforce", "--n", "8"],
        ["verify", "--suite", "bruteforce", "--n-max", "8"],
        ["verify", "--suite", "param-oracle", "--n-min", "20", "--n-max", "10"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["table", "--format", "xml"],
        ["verify", "--suite", "no-such-suite"],
        ["bruteforce"],
        ["bruteforce", "--n", "5", "--workers", "0"],
    ],
)
def test_argparse_errors_exit_2(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_verify_single_suite_passes(capsys):
    code, out, _ = run(["verify", "--suite", "intermediate-sums", "--n-max", "40"], capsys)
    assert code == 0
    assert out.startswith("PASS intermediate-sums:")
    assert "note: small-n mismatches: X(1), Y(1), W(1)" in out


def test_verify_fails_with_exit_1_on_injected_bug(monkeypatch, capsys):
    real = formulas.count_C

    def broken(n, tables=None):
        return real(n, tables) + (1 if n == 9 else 0)

    monkeypatch.setattr(formulas, "count_C", broken)
    code, out, _ = run(["verify", "--suite", "param-oracle", "--n-min", "8", "--n-max", "10"], capsys)
    assert code == 1
    assert out.startswith("FAIL param-oracle")
    assert "C(9)" in out


def test_verify_writes_to_file(tmp_path):
    out = tmp_path / "report.txt"
    code = cli.main(["verify", "--suite", "quadruple-lemma", "--n-max", "20", "--out", str(out)])
    assert code == 0
    assert out.read_text().startswith("PASS quadruple-lemma")


def test_bruteforce_report(capsys):
    code, out, _ = run(["bruteforce", "--n", "4", "--workers", "1"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["n"] == 4
    assert report["H11"] == {"A": 0, "B": 3, "C": 1, "D": 0}
    assert report["H2"] == {"F": 4, "G": 5}


def test_bruteforce_classes_sweep(capsys):
    code, out, _ = run(["bruteforce", "--n", "5", "--sweep", "classes"], capsys)
    assert code == 0
    assert json.loads(out)["H11"] == {"A": 5, "B": 11, "C": 6, "D": 2}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sqtiled", "table", "--n-min", "4", "--n-max", "4"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "n,A,B,C,D,E\n4,0,3,1,0,4\n"


def test_log_level_env(monkeypatch, capsys):
    monkeypatch.setenv("LOG_LEVEL", "debug")
    code, _, _ = run(["table", "--n-min", "4", "--n-max", "4"], capsys)
    assert code == 0
