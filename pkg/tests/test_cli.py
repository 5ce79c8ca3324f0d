import json

import pytest

from padic_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_and_describe(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    for name in ("boundary-gap", "psidiv", "psisum", "psibound", "supsi", "ckn-growth", "lt-check", "pn-binom", "bn-dn", "constfun", "extract", "fourier-roundtrip", "mahler", "peano-qp", "imocpof"):
        assert name in out
    code, out, _ = run(capsys, "describe", "psibound")
    assert code == 0 and "V(f, mu_{n+1}) + (n-1) v_1" in out


def test_usage_errors(capsys):
    assert run(capsys, "no-such-experiment")[0] == 2
    assert run(capsys, "describe", "nope")[0] == 2
    code, _, err = run(capsys, "psidiv", "--p", "6")
    assert code == 2 and "--p" in err
    assert run(capsys, "psidiv", "--precision", "3")[0] == 2
    assert run(capsys, "supsi", "--field", "weird:t")[0] == 2


def test_supsi_json(capsys):
    code, out, _ = run(capsys, "supsi", "--field", "eisenstein:t^2-3", "--nmax", "3")
    assert code == 0
    data = json.loads(out)
    assert [r["min_val"] for r in data["rows"]] == ["1/2", "1", "3/2"]
    assert data["status"] == "pass"


def test_deterministic_output(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(capsys, "boundary-gap", "--p", "2", "--deg", "8", "--nmax", "4", "--samples", "10", "--seed", "7", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_csv(capsys):
    code, out, _ = run(capsys, "mahler", "--roundtrip", "--K", "8", "--format", "csv", "--samples", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("sample,")
    assert len(lines) == 1 + 4


def test_violation_and_inconclusive_exit_codes(capsys):
    # an impossible policy threshold turns the gap run into a violation
    code, _, _ = run(capsys, "boundary-gap", "--nmax", "3", "--samples", "5", "--gap-tol", "0", "--gap-frac", "1")
    assert code == 1
    # a zero inconclusive budget can never be met
    code, _, _ = run(capsys, "psibound", "--samples", "2", "--nmax", "1", "--inconclusive-rate", "0")
    assert code == 3


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("PADIC_LAB_THREADS", "2")
    code, out2, _ = run(capsys, "psidiv", "--samples", "6")
    monkeypatch.setenv("PADIC_LAB_THREADS", "1")
    code1, out1, _ = run(capsys, "psidiv", "--samples", "6")
    assert code == code1 == 0 and out1 == out2
