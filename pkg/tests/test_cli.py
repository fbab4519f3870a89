import json
import subprocess
import sys
from pathlib import Path

import pytest

from weylbkk.cli import main
from weylbkk.io import strip_timing

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("n,p", [(1, 5), (2, 7)])
def test_verify_bracket_passes(capsys, n, p):
    code, out, _ = run(capsys, "verify-bracket", "--n", str(n), "--p", str(p), "--samples", "5")
    assert code == 0
    assert out.strip().endswith("PASS")


def test_verify_bracket_rejects_composite(capsys):
    code, _, err = run(capsys, "verify-bracket", "--n", "1", "--p", "4")
    assert code == 2 and "not prime" in err


def test_fc_identity(capsys):
    code, out, _ = run(capsys, "fc", "--morphism", str(DATA / "identity_n1.json"), "--p", "5")
    assert code == 0
    assert "f_c(xi1) = xi1" in out and "symplectic: pass" in out


def test_fc_untwist(capsys):
    code, out, _ = run(capsys, "fc", "--morphism", str(DATA / "elementary_x2.json"), "--p", "5", "--untwist")
    assert code == 0 and "phi_p(xi2) = 2*xi1 + xi2" in out


def test_fc_small_p_warns(capsys):
    path = str(DATA / "gradient_x2.json")
    code, out, _ = run(capsys, "fc", "--morphism", path, "--p", "3")
    assert code == 0
    assert "xi1^2 + xi2 + 2" in out and "warning" in out
    assert main(["fc", "--morphism", path, "--p", "3", "--strict"]) == 1


def test_fc_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "images": ["x1", "y1 + y1^2"]}')
    assert run(capsys, "fc", "--morphism", str(bad), "--p", "5")[0] == 2
    assert run(capsys, "fc", "--morphism", str(tmp_path / "missing.json"), "--p", "5")[0] == 2
    assert run(capsys, "fc", "--morphism", str(DATA / "identity_n1.json"))[0] == 2


def test_independence_examples(capsys):
    word = str(DATA / "cubic_fourier.json")
    assert run(capsys, "independence", "--word", word, "--primes", "11,13,17")[0] == 0
    assert run(capsys, "independence", "--word", word, "--primes", "3,11,13")[0] == 0
    assert run(capsys, "independence", "--word", word, "--primes", "3,11,13", "--strict")[0] == 1
    assert run(capsys, "independence", "--word", str(DATA / "gradient_x2.json"), "--primes", "3")[0] == 1
    assert run(capsys, "independence", "--word", word, "--primes", "11,12")[0] == 2


def test_ultra_demo(capsys):
    code, out, _ = run(capsys, "ultra-demo", "--p", "257", "--m", "8", "--x", "1000")
    assert code == 0 and "pass" in out
    assert run(capsys, "ultra-demo", "--p", "3", "--m", "2")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "verify-bracket")[0] == 2


def test_structured_output_is_deterministic(capsys):
    argv = ["random-suite", "--n", "1", "--count", "3", "--seed", "5", "--format", "structured"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert strip_timing(json.loads(first)) == strip_timing(json.loads(second))
    _, a, _ = run(capsys, *argv, "--no-timing")
    _, b, _ = run(capsys, *argv, "--no-timing")
    assert a == b and "timing_ms" not in a
    data = json.loads(a)
    assert data["pass"] is True and data["exit_code"] == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "weylbkk.cli", "ultra-demo", "--p", "5", "--m", "2", "--x", "3", "--format", "structured"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
