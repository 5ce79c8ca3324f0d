import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from padic_lab.lubintate import (
    FormalModule,
    TorsionLabel,
    ckn,
    lt_exp,
    lt_group_law,
    lt_log,
    lt_mult,
    module_from_json,
    module_to_json,
    omega_val,
    pn_polys,
    torsion_embed,
    torsion_pairwise_val,
)
from padic_lab.padics import Exact, Qp, field_create
from padic_lab.powseries import TruncSeries

Q2, Q3 = Qp(2), Qp(3)
E3 = field_create(3, [-3, 0, 1], "Eisenstein")
U2 = field_create(2, [1, 1, 1], "Unramified")

M_X, N_P = 10, 8
MODULES = {
    "Q2": FormalModule(Q2, M=M_X, N=N_P),
    "Q3": FormalModule(Q3, M=M_X, N=N_P),
    "E3": FormalModule(E3, M=M_X, N=N_P),
    "U2": FormalModule(U2, M=M_X, N=N_P),
}


def vanishes(s, N=N_P):
    return all(c.is_zero() and (c.prec is None or c.prec >= N) for c in s.coeffs)


def elem(F, cs):
    return F.from_coords(cs[: F.d])


coords = st.lists(st.integers(0, 3**8), min_size=2, max_size=2)


@pytest.mark.parametrize("key", sorted(MODULES))
@given(a=coords, b=coords)
def test_endomorphisms_compose_and_add(key, a, b):
    M = MODULES[key]
    F = M.F
    a, b = elem(F, a), elem(F, b)
    A, B = lt_mult(M, a), lt_mult(M, b)
    assert vanishes(A.compose(B).truncate(M_X) - lt_mult(M, a * b))
    law = lt_group_law(M)
    assert vanishes(law.subs(A, B) - lt_mult(M, a + b))


@pytest.mark.parametrize("key", sorted(MODULES))
def test_group_law_axioms(key):
    M = MODULES[key]
    F = M.F
    G = lt_group_law(M)
    X = TruncSeries.X(F, M_X)
    zero = TruncSeries(F, [], M_X)
    assert vanishes(G.subs(X, zero) - X)
    assert vanishes(G.subs(X, lt_mult(M, -1)))
    # commutativity
    for (i, j), c in G.terms.items():
        assert (c - G[(j, i)]).is_zero()
    # [pi] is an endomorphism of the law
    P = M.P.truncate(M_X)
    three = lt_mult(M, 3)
    assert vanishes(P.compose(G.subs(X, three)) - G.subs(P, P.compose(three)))


@pytest.mark.parametrize("key", sorted(MODULES))
def test_log_and_exp(key):
    M = MODULES[key]
    F = M.F
    log = lt_log(M)
    X = TruncSeries.X(F, M_X)
    assert vanishes(log.compose(M.P.truncate(M_X)) - log.scale(F.pi))
    assert vanishes(lt_exp(M).compose(log) - X)
    # log turns the law into addition: log(X +_F [b]X) = (1 + b) log X
    b = F(5)
    lhs = log.compose(lt_group_law(M).subs(X, lt_mult(M, b)))
    assert vanishes(lhs - log.scale(F.one() + b))


def test_multiplicative_closed_forms():
    M = FormalModule(Q2, M=8)
    assert M.multiplicative
    A = lt_mult(M, -1)
    # (1+X)^(-1) - 1 = -X + X^2 - X^3 ...
    assert [c.rational() for c in A.coeffs] == [0] + [(-1) ** i for i in range(1, 8)]
    # (1+X)^(1/3) - 1 has 2-integral binomial coefficients
    B = lt_mult(M, Q2(Fraction(1, 3)))
    y = sympy.Rational(1, 3)
    assert [c.rational() for c in B.coeffs[1:4]] == [Fraction(str(sympy.binomial(y, k))) for k in range(1, 4)]


def _pn_by_recurrence(log_coeffs, n_max):
    """n g_n = Y sum_{j=1}^n j l_j g_{n-j}, from d/dX exp(Y log X)."""
    Y = sympy.Symbol("Y")
    g = [sympy.Integer(1)]
    for n in range(1, n_max + 1):
        s = sum(j * log_coeffs[j] * g[n - j] for j in range(1, n + 1))
        g.append(sympy.expand(Y * s / n))
    return g, Y


@pytest.mark.parametrize("key", ["Q3", "E3"])
def test_pn_polys_match_ode_recurrence(key):
    M = FormalModule(MODULES[key].F, M=8)
    F = M.F
    n_max = 6
    P = pn_polys(M, n_max)
    log = lt_log(M)
    t = sympy.Symbol("t")

    def to_sym(c):
        return sum(sympy.Rational(x.numerator, x.denominator) * t**i for i, x in enumerate(c.coords()))

    gmod = sympy.Poly(sum(c * t**i for i, c in enumerate(F.g)), t)
    lc = [to_sym(log[j]) if j < len(log.coeffs) else 0 for j in range(n_max + 1)]
    g, Y = _pn_by_recurrence(lc, n_max)
    for n in range(n_max + 1):
        want = sympy.Poly(g[n], Y)
        for k in range(n + 1):
            w = sympy.rem(sympy.Poly(want.coeff_monomial(Y**k), t), gmod)
            got = sympy.Poly(to_sym(P[n][k]), t)
            assert (w - got).is_zero


def test_pn_binomial_qp():
    M = FormalModule(Q3, TruncSeries(Q3, [0, 3, 3, 1]), M=12)
    P = pn_polys(M, 10)
    Y = sympy.Symbol("Y")
    for n in range(11):
        want = sympy.Poly(sympy.expand_func(sympy.binomial(Y, n)), Y)
        got = [c.rational() for c in P[n]]
        assert got == [Fraction(str(want.coeff_monomial(Y**k))) for k in range(len(got))]


def test_omega_val():
    assert omega_val(Q2) == 0 and omega_val(Q3) == 0
    assert omega_val(E3) == Fraction(1, 4)
    assert omega_val(U2) == Fraction(2, 3)


def test_ckn_first_level():
    M = FormalModule(Q2, M=4)
    assert [ckn(M, k, 1).rational() for k in range(3)] == [1, -1, 2]


@pytest.mark.parametrize("P", [None, "std3"])
def test_label_valuations_match_embeddings(P):
    F = Q2 if P is None else Q3
    M = FormalModule(F, M=30)
    n = 3 if P is None else 2
    p = F.p
    labels = [TorsionLabel(n, F(a)) for a in range(p**n)]
    emb = {l.a.rational(): torsion_embed(M, l) for l in labels}
    for l1 in labels:
        for l2 in labels:
            if l1 == l2:
                continue
            want = torsion_pairwise_val(M, l1, l2)
            d = emb[l1.a.rational()] - emb[l2.a.rational()]
            got = d.val()
            assert got == want


def test_module_json_roundtrip():
    M = MODULES["E3"]
    M2 = module_from_json(module_to_json(M))
    assert M2.F == M.F and M2.M == M.M and M2.N == M.N
    assert all((a - b).is_zero() for a, b in zip(M.P.coeffs, M2.P.coeffs))
