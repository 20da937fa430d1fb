import io
import subprocess
import sys

import pytest

from dbpt.cli import main
from dbpt.inference import infer_checked
from dbpt.oracle import EnumBudget, enum_beta_nfs
from dbpt.syntax import parse_term, print_term
from dbpt.typing_rules import to_sexpr

RUNNING = "2 (\\. 1) 1 \\. (1 1)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_parse(capsys):
    assert run(capsys, "parse", "2 (\\.1) 1 \\.(1 1)") == (0, RUNNING, "")
    assert run(capsys, "parse", "--as", "type", "(a0 -> a1) -> a2")[1] == "(a0 -> a1) -> a2"
    assert run(capsys, "parse", "--as", "context", "w.a0.nil")[1] == "w.a0.nil"
    code, out, err = run(capsys, "parse", "(\\. 1")
    assert code == 2 and out == "" and err.startswith("parse error")


def test_normalize(capsys):
    assert run(capsys, "normalize", "(\\. 1) 2")[:2] == (0, "2")
    code, out, _ = run(capsys, "normalize", "--fuel", "5", "(\\. 1 1) \\. 1 1")
    assert code == 1 and out.startswith("fail: fuel exhausted")


def test_infer(capsys):
    code, out, _ = run(capsys, "infer", RUNNING)
    lines = out.splitlines()
    assert code == 0
    # printed after canonical renaming, so variables are numbered by first occurrence
    assert lines[0] == "a0.((a1 -> a1) -> a0 -> (a2 /\\ (a2 -> a3) -> a3) -> a4).nil |- a4"
    assert lines[1].startswith("(")
    code, out, _ = run(capsys, "infer", "(\\. 1) 2")
    assert code == 1 and "normal" in out
    assert run(capsys, "infer", "--normalize-first", "(\\. 1) 2")[1].splitlines()[0] == "w.a0.nil |- a0"


def test_recon(capsys):
    assert run(capsys, "recon", "w.w.a0.nil |- a0")[:2] == (0, "3")
    assert run(capsys, "recon", "nil |- a0")[:2] == (1, "fail: no-FO")
    assert run(capsys, "recon", "nil |- a1 -> a1 /\\ a0 -> a0")[:2] == (1, "fail: leftover-nonempty")


def test_check(capsys, tmp_path):
    _, d = infer_checked(parse_term(RUNNING))
    f = tmp_path / "d.sexp"
    f.write_text(to_sexpr(d))
    for system in ("sm", "smr"):
        code, out, _ = run(capsys, "check", "--system", system, "--derivation", str(f))
        assert code == 0 and out.startswith(f"ok {system}: ")
    f.write_text('(var_r ("1" "a0.nil" "a0")')
    assert run(capsys, "check", "--derivation", str(f))[:2] == (2, "")
    f.write_text('(var_r ("1" "a0.nil" "a1"))')
    code, out, _ = run(capsys, "check", "--derivation", str(f))
    assert code == 1 and out.startswith("fail:")
    f.write_text('(var_r ("1" "a0.nil" "a0"))')
    assert run(capsys, "check", "--derivation", str(f))[:2] == (0, "ok smr: a0.nil |- a0")


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "w.a0.nil |- a0")
    assert code == 0
    assert out.splitlines() == ["closed: true", "fc: true", "mc: true", "complete: true",
                                "principal: true", "fo: {(2, a0)}"]
    comp = "(a1 -> (a2 -> a3) -> a4).((a1 -> a4) -> (a3 -> a2) -> a0).nil |- a0"
    out = run(capsys, "analyze", comp)[1].splitlines()
    assert "complete: true" in out and "principal: false" in out
    assert run(capsys, "analyze", "--max-width", "1", "(a0 /\\ a1 -> a0).nil |- a0")[0] == 1


def test_selftest_and_sr_demo(capsys):
    code, out, _ = run(capsys, "selftest", "--max-size", "3", "--max-index", "1")
    assert code == 0 and "violations: 0" in out
    code, out, _ = run(capsys, "sr-demo")
    assert code == 0
    assert "subject reduction fails: true" in out
    assert "contractum typeable under the before context: no" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "dbpt", "infer", "\\. 1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.splitlines()[0] == "nil |- a0 -> a0"


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("\\. 1\n"))
    assert run(capsys, "parse") == (0, "\\. 1", "")


@pytest.mark.parametrize("n", list(enum_beta_nfs(EnumBudget(4, 2))), ids=print_term)
def test_infer_recon_text_round_trip(capsys, n):
    code, out, _ = run(capsys, "infer", print_term(n))
    assert code == 0
    assert run(capsys, "recon", out.splitlines()[0])[:2] == (0, print_term(n))
