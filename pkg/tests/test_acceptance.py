"""Acceptance run: one PASS/FAIL line per criterion.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script.
Each criterion is a list of experiment configs; it passes when every
report comes back with status "pass".
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from padic_lab.experiments import ExperimentConfig, run  # noqa: E402

E3 = "eisenstein:t^2-3"
U2 = "unramified:t^2+t+1"


def C(name, **kw):
    return ExperimentConfig(name=name, **kw)


CRITERIA = {
    1: ("psi-divisibility, 200 integral series over Q_2/Q_3 plus [pi] over t^2-3", [
        C("psidiv", p=2, samples=100, seed=1),
        C("psidiv", p=3, samples=100, seed=2),
        C("psidiv", field=E3, samples=20, seed=3),
    ]),
    2: ("trace-sum identity vs power-sum oracle, p=2 n<=4, p=3 n<=3", [
        C("psisum", p=2, nmax=4, samples=100, N=20, seed=4),
        C("psisum", p=3, nmax=3, samples=100, N=20, seed=5),
    ]),
    3: ("trace growth bound never violated, inconclusive rate < 5%", [
        C("psibound", p=2, nmax=4, samples=100, N=20, seed=4),
        C("psibound", p=3, nmax=3, samples=100, N=20, seed=5),
    ]),
    4: ("sup of iterated traces of X^k equals n val(pi), certified tail", [
        C("supsi", p=2, nmax=4),
        C("supsi", p=3, nmax=4),
        C("supsi", field=E3, nmax=3),
    ]),
    5: ("boundary gap >= 0 for n <= 6, gap(6) <= 1/4 for >= 95%, f=X gives mu_n", [
        C("boundary-gap", p=2, deg=8, nmax=6, samples=100, seed=7),
    ]),
    6: ("c_{k,n} growth n(val pi - val q): -n/2 over t^2-3, 0 over Q_p", [
        C("ckn-growth", field=E3, nmax=3),
        C("ckn-growth", p=2, nmax=3),
        C("ckn-growth", p=3, nmax=3),
    ]),
    7: ("Lubin-Tate laws to X-order 20, p-precision 15, 20 pairs per field", [
        C("lt-check", p=2, M=20, N=15, samples=20, seed=8),
        C("lt-check", p=3, M=20, N=15, samples=20, seed=9),
        C("lt-check", field=E3, M=20, N=15, samples=20, seed=10),
        C("lt-check", field=U2, p=2, M=20, N=15, samples=20, seed=11),
    ]),
    8: ("P_n = binom(Y, n) over Q_p for n <= 15", [
        C("pn-binom", p=2, nmax=15),
        C("pn-binom", p=3, nmax=15),
    ]),
    9: ("B_n fiber constraints and strict D_n bound, exhaustive", [
        C("bn-dn", p=2, nmax=5, lam=lam) for lam in ("1/4", "1/2", "3/4")
    ] + [
        C("bn-dn", p=3, nmax=3, lam=lam) for lam in ("1/4", "1/2", "3/4")
    ]),
    10: ("constant-term -1 function: f(0) = -1, min val >= -eps, evaluations agree", [
        C("constfun", p=2, eps="1/2", m=2, nmax=4),
        C("constfun", p=2, eps="1/4", m=3, nmax=4),
    ]),
    11: ("coefficient extraction, 50 integral h, p=2, eps=1/4, zero violations", [
        C("extract", p=2, eps="1/4", nmax=5, m=1, samples=50, seed=12),
    ]),
    12: ("finite Fourier: forward(invert) and tensor factorisation exact", [
        C("fourier-roundtrip", p=p, level=lv) for p in (2, 3) for lv in (1, 2)
    ] + [
        C("fourier-roundtrip", field=U2, p=2, level=1),
        C("fourier-roundtrip", field=E3, level=1),
    ]),
    13: ("Mahler round trip K <= 32, Peano map is the identity over Q_p", [
        C("mahler", p=2, K=32, seed=13),
        C("mahler", p=3, K=32, seed=14),
        C("peano-qp", p=2, K=32, seed=15),
        C("peano-qp", p=3, K=32, seed=16),
    ]),
    14: ("Weierstrass residual vanishes on 100 random inputs, wideg <= 6", [
        C("weierstrass", p=2, samples=50, seed=17),
        C("weierstrass", p=3, samples=30, seed=18),
        C("weierstrass", field=E3, N=15, samples=20, seed=19),
    ]),
}


def evaluate(k: int):
    title, cfgs = CRITERIA[k]
    t0 = time.time()
    bad = []
    for cfg in cfgs:
        rep = run(cfg)
        if rep.status != "pass":
            bad.append(f"{cfg.name}[{cfg.field},p={cfg.p}] -> {rep.status} {rep.summary}")
    ok = not bad
    line = f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {title} ({time.time() - t0:.1f}s)"
    return ok, line, bad


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    ok, line, bad = evaluate(k)
    with capsys.disabled():
        print("\n" + line)
        for b in bad:
            print("    " + b)
    assert ok, "; ".join(bad)


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        ok, line, bad = evaluate(k)
        print(line, flush=True)
        for b in bad:
            print("    " + b)
        failed += not ok
    sys.exit(1 if failed else 0)
