import io
import os
import subprocess
import sys

import pytest

from gameaudit.cli import run
from gameaudit.regime import read_pgm

DIAG = "bundled:diagonal_save.penalty"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = cli(*argv)
    assert code == 0, err
    assert err == ""
    return out


def test_solve_fig1_strict():
    assert ok("solve", "--game", "bundled:fig1.game", "--mode", "strict") == (
        "pure Nash equilibria (strict): 1\n"
        "  (stays home, stays home) payoffs (4, 4)\n")


def test_solve_fig1_weak():
    assert ok("solve", "--game", "bundled:fig1.game").splitlines()[1:] == [
        "  (stays home, stays home) payoffs (4, 4)",
        "  (invests abroad, invests abroad) payoffs (2, 2)",
    ]


def test_solve_penalty_mixed():
    out = ok("solve", "--game", DIAG, "--mixed")
    assert "shooter mix (left, middle, right): (0.333333, 0.333333, 0.333333)\n" in out
    assert "goal probability: 0.666667\n" in out
    assert out.endswith("full-support indifference: Valid\n")


def test_solve_mixed_not_constant_sum():
    assert ok("solve", "--game", "bundled:fig1.game", "--mixed").endswith(
        "mixed: not constant-sum; minimax solution not applicable\n")


def test_digits_flag():
    out = ok("--digits", "3", "solve", "--game", DIAG, "--mixed")
    assert "goal probability: 0.667\n" in out


def test_envy_one_point_five():
    assert ok("envy", "--epsilon", "1.5") == (
        "cells (row = company B, column = company A), shown as (A's profit, B's profit):\n"
        "  B stays home: (4, 4)  (4.5, 0.5)\n"
        "  B invests abroad: (0.5, 4.5)  (2, 2)\n"
        "strict NE: (invests abroad, invests abroad) payoffs (2, 2)\n"
        "weak NE: (invests abroad, invests abroad) payoffs (2, 2)\n"
        "payoff dominant: (invests abroad, invests abroad) payoffs (2, 2)\n")


def test_envy_sweep():
    lines = ok("envy", "--sweep", "--step", "0.5").splitlines()
    assert lines[1:6] == ["0,1,1,1,0", "0.5,1,1,1,1", "1,1,0,1,1", "1.5,0,0,1,1", "2,0,0,1,1"]
    assert lines[-1] == "# regime law holds: yes"


def test_envy_params():
    assert "strict NE: (stays home, stays home)" in ok("envy", "--params", "0,0,0,0")


def test_pinto():
    out = ok("pinto")
    for line in ("total cost: $137,500,000.00", "total benefit: $49,530,000.00", "decision: Reject",
                 "societal loss per death (itemized): $200,725.00",
                 "break-even unit value for death: $688,722.22"):
        assert line + "\n" in out


def test_pinto_break_even_item():
    # (137,500,000 - 36,000,000 - 12,060,000) / 2,100
    assert ok("pinto", "--break-even", "vehicle").endswith(
        "break-even unit value for vehicle: $42,590.48\n")


def test_utility():
    assert ok("utility", "--instance", "bundled:abc.csv", "--rank") == "B: 7\nA: 6\n"
    flip = ok("utility", "--instance", "bundled:abc.csv", "--flip", "A")
    assert flip.endswith("ranking under transform:\n  A: 3\n  B: 2\n")
    assert ok("utility", "--instance", "bundled:abc.csv", "--weights", "0.01,0.01,1") == (
        "preserves argmax: false\nweighted winner A differs from plain-sum winner B\n")


def test_axioms():
    field = ok("axioms", "--structure", "bundled:mod4.structure", "--field")
    assert "mul_nonzero.inverse: Fails('2',)\n" in field
    assert field.endswith("all hold: false\n")
    assert ok("axioms", "--structure", "bundled:mod5.structure", "--field").endswith("all hold: true\n")
    eh = ok("axioms", "--structure", "bundled:envy_hate.structure", "--group", "add")
    assert eh.startswith("add.closure: Fails('envy', 'envy')\n")
    hom = ok("axioms", "--structure", "bundled:mod5.structure", "--hom", "bundled:mod5_identity.map")
    assert hom.startswith("hom.additive: Fails('1', '4')\n")


def test_ultimatum():
    assert ok("ultimatum", "--total", "10", "--thresholds", "bundled:uniform_1_9.csv") == (
        "offer: 5\nproposer keeps: 5\naccept probability: 0.555556\nproposer expected: 2.77778\n")
    assert ok("ultimatum", "--total", "10", "--thresholds", "bundled:homo_economicus.csv").startswith(
        "offer: 1\nproposer keeps: 9\n")


def test_montecarlo_report_and_determinism():
    argv = ("montecarlo", "--game", DIAG, "--dist", "bundled:uniform_sl_sm.dist", "--samples", "500", "--seed", "9")
    a, b = ok(*argv), ok(*argv)
    assert a == b
    assert "straddles boundary: true\n" in a
    assert "classification at mean: Invalid\n" in a


def test_regime_writes_only_out(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    target = tmp_path / "maps" / "r.pgm"
    target.parent.mkdir()
    before = sorted(p.name for p in tmp_path.rglob("*"))
    out = ok("regime", "--game", DIAG, "--vary", "sl", "sm", "--resolution", "11", "--out", str(target))
    after = sorted(p.name for p in tmp_path.rglob("*"))
    assert after == sorted(before + ["r.pgm"])
    assert out.splitlines()[0] == "resolution: 11"
    img = read_pgm(target.read_text())
    assert img.shape == (11, 11) and img[0, 0] == 128


def test_regime_csv_byte_stable(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        ok("regime", "--game", DIAG, "--vary", "1,0", "1,1", "--resolution", "7", "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_text().splitlines()[0] == "v1,v2,class"


@pytest.mark.parametrize("argv", [
    [],
    ["solve"],
    ["bogus"],
    ["envy"],
    ["envy", "--epsilon", "1", "--params", "1,1,1,1"],
    ["envy", "--sweep"],
    ["envy", "--params", "1,2"],
    ["utility", "--instance", "bundled:abc.csv"],
    ["regime", "--game", DIAG, "--vary", "sl", "zz", "--out", "x.csv"],
    ["regime", "--game", DIAG, "--resolution", "1", "--out", "x.csv"],
    ["montecarlo", "--game", DIAG, "--dist", "x", "--samples", "0"],
    ["--digits", "0", "pinto"],
])
def test_usage_errors_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, err = cli(*argv)
    assert code == 2
    assert err.startswith("usage error: ") and err.count("\n") == 1
    assert list(tmp_path.iterdir()) == []


@pytest.mark.parametrize("argv, fragment", [
    (["solve", "--game", "/nonexistent.game"], "/nonexistent.game: cannot read file"),
    (["solve", "--game", "bundled:nope.game"], "no such bundled file"),
    (["axioms", "--structure", "bundled:fig1.game", "--field"], "bundled:fig1.game:5: content before"),
    (["utility", "--instance", "bundled:abc.csv", "--flip", "Z"], "unknown option 'Z'"),
    (["envy", "--epsilon", "-1"], "must be"),
])
def test_domain_errors_exit_1(argv, fragment):
    code, out, err = cli(*argv)
    assert code == 1
    assert fragment in err


def test_bad_file_names_line(tmp_path):
    bad = tmp_path / "bad.game"
    bad.write_text("2 2\n1,1 2,2\n3,3\n")
    code, _, err = cli("solve", "--game", str(bad))
    assert code == 1
    assert f"{bad}:3: expected 2 cells, found 1" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gameaudit", "pinto"], capture_output=True, text=True,
                          env={**os.environ, "PYTHONHASHSEED": "0"})
    assert proc.returncode == 0
    assert "decision: Reject" in proc.stdout
