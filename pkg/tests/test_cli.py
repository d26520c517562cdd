import io
import subprocess
import sys

import pytest

from qsymgb.cli import EXIT_CAPPED, EXIT_MATH, EXIT_OK, EXIT_USAGE, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_gens_g4_line_count():
    code, text = run("gens", "--n", "4", "--set", "G")
    assert code == EXIT_OK
    assert len(text.splitlines()) == 78


def test_gens_single_relation():
    code, text = run("gens", "--n", "4", "--family", "ip", "--indices", "2,2")
    assert code == EXIT_OK and text == "u[2,2]*u[2,2] - u[2,2]\n"
    assert run("gens", "--n", "4", "--family", "rinj", "--indices", "2,2")[0] == EXIT_USAGE
    assert run("gens", "--n", "4", "--family", "nope")[0] == EXIT_USAGE


def test_invalid_sizes():
    assert run("gens", "--n", "3")[0] == EXIT_USAGE
    assert run("gens", "--n", "zero")[0] == EXIT_USAGE
    assert run("wordproblem", "--n", "3", "--lhs", "1", "--rhs", "1")[0] == EXIT_USAGE


def test_wordproblem():
    code, text = run("wordproblem", "--n", "4", "--lhs", "u[2,2]*u[3,3]", "--rhs", "u[3,3]*u[2,2]")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "DISTINCT"
    assert lines[1].startswith("nf(lhs) = ") and lines[2] == "nf(rhs) = u[3,3]*u[2,2]"
    code, text = run("wordproblem", "--n", "4", "--lhs", "u[1,1]*u[1,2]", "--rhs", "0")
    assert text.splitlines()[0] == "EQUIVALENT"


def test_parse_error_exit_code(capsys):
    code, _ = run("nf", "--n", "4", "--poly", "u[1,1] +* u[2,2]")
    assert code == EXIT_USAGE
    assert "position 8" in capsys.readouterr().err


def test_nf_certificate_reverifies(tmp_path):
    cert = tmp_path / "c.txt"
    code, text = run("nf", "--n", "4", "--poly", "u[1,1]*u[1,2]*u[3,3] - 2*u[4,1] + 1/2",
                     "--certificate", str(cert))
    assert code == EXIT_OK
    code, text = run("verify-cert", "--n", "4", "--basis", "G", "--cert", str(cert))
    assert code == EXIT_OK and text.startswith("PASS")
    body = cert.read_text().replace("summand 1/1", "summand 2/1", 1)
    cert.write_text(body)
    code, text = run("verify-cert", "--n", "4", "--basis", "G", "--cert", str(cert))
    assert code == EXIT_MATH and text.startswith("FAIL")


def test_verify_cert_wrong_basis(tmp_path):
    cert = tmp_path / "c.txt"
    run("nf", "--n", "4", "--poly", "u[1,1]*u[1,2]", "--certificate", str(cert))
    assert run("verify-cert", "--n", "4", "--basis", "F", "--cert", str(cert))[0] == EXIT_MATH


def test_basis_from_file(tmp_path):
    f = tmp_path / "basis.txt"
    f.write_text("# two words that overlap\nu[1,1]*u[1,2] - u[1,2]\nu[1,2]*u[1,1] - u[2,2]\n")
    code, text = run("check-gb", "--n", "3", "--basis", str(f), "--jobs", "1")
    assert code == EXIT_MATH and text.startswith("FAIL")
    code, text = run("buchberger", "--n", "3", "--input", str(f))
    assert code == EXIT_OK
    assert text.splitlines()[-1].startswith("# status completed")
    out = tmp_path / "gb.txt"
    out.write_text(text)
    assert run("check-gb", "--n", "3", "--basis", str(out), "--jobs", "1")[0] == EXIT_OK


def test_check_gb_g4():
    code, text = run("check-gb", "--n", "4", "--basis", "G", "--jobs", "1")
    assert code == EXIT_OK and text.startswith("PASS")


def test_check_gb_reports_witnesses():
    code, text = run("check-gb", "--n", "4", "--basis", "F", "--jobs", "1")
    assert code == EXIT_MATH
    assert "overlap" in text and "->" in text


def test_buchberger_capped():
    code, text = run("buchberger", "--n", "4", "--input", "Fpp", "--max-rounds", "1")
    assert code == EXIT_CAPPED
    assert "status capped" in text


def test_param_check():
    code, text = run("param-check", "--identity", "rowcol", "--samples", "4..9")
    assert code == EXIT_OK and "PASS" in text.splitlines()[0]
    assert run("param-check", "--identity", "rowcol", "--samples", "9..4")[0] == EXIT_USAGE
    assert run("param-check", "--identity", "missing-file")[0] == EXIT_USAGE


def test_param_check_failure(tmp_path):
    from qsymgb.params.fixtures import fixture_text
    text = fixture_text("rowcol").replace("lhs 1 : i1=1 & i2=1", "lhs 2 : i1=1 & i2=1")
    f = tmp_path / "bad.identity"
    f.write_text(text)
    code, out = run("param-check", "--identity", str(f))
    assert code == EXIT_MATH and "i1=1 & i2=1" in out


def test_suite_subset():
    code, text = run("suite", "--n", "6", "--only", "4,7,11")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "3 of 3 criteria passed"
    assert run("suite", "--only", "12")[0] == EXIT_USAGE


def test_deterministic_output():
    a = run("nf", "--n", "5", "--poly", "u[2,2]*u[3,3]*u[4,4] - u[5,5]*u[1,1]", "--basis", "G")
    b = run("nf", "--n", "5", "--poly", "u[2,2]*u[3,3]*u[4,4] - u[5,5]*u[1,1]", "--basis", "G")
    assert a == b


def test_console_entry_point():
    # fresh process: nothing cached
    cmd = [sys.executable, "-m", "qsymgb.cli", "gens", "--n", "4", "--set", "B"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert first == second and len(first.splitlines()) == 15
