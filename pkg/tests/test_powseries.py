from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_lab.padics import AtLeast, Exact, INFINITE, Qp, field_create
from padic_lab.powseries import (
    TruncSeries,
    gauss_V,
    newton_polygon,
    power_sums,
    resultant,
    root_valuations,
    series_from_json,
    series_to_json,
    v_profile,
    weierstrass_divide,
    weierstrass_prep,
    wideg,
)

import oracles

Q2, Q3 = Qp(2), Qp(3)
E3 = field_create(3, [-3, 0, 1], "Eisenstein")

small = st.integers(-(2**20), 2**20)


def test_newton_polygon_example():
    # 2 + X + 4X^2: vertices (0,1), (1,0), (2,2)
    f = TruncSeries(Q2, [2, 1, 4])
    assert newton_polygon(f).root_valuations() == [(Fraction(1), 1), (Fraction(-2), 1)]


def test_gauss_V_and_tail():
    f = TruncSeries(Q2, [4, 2, 1])
    assert gauss_V(f, 0) == Exact(0)
    assert gauss_V(f, Fraction(1, 2)) == Exact(1)
    g = TruncSeries(Q2, [1, 0], 2, tail_val=0)
    assert gauss_V(g, 1) == Exact(0)
    h = TruncSeries(Q2, [0, 0], 2, tail_val=3)
    assert gauss_V(h, 0) == AtLeast(3)


def test_wideg():
    assert wideg(TruncSeries(Q2, [2, 4, 1, 3])) == 2
    assert wideg(TruncSeries(Q2, [2, 4])) == float("inf")
    with pytest.raises(ValueError):
        wideg(TruncSeries(Q2, [Fraction(1, 2)]))


@given(st.lists(small, min_size=1, max_size=6), st.lists(small, min_size=2, max_size=5))
def test_resultant_matches_sympy(f, w):
    w = w[:-1] + [1]
    W = TruncSeries(Q3, w)
    F = TruncSeries(Q3, f)
    if not F.coeffs:
        return
    r = resultant(W, F)
    assert r.rational() == oracles.resultant(w, f)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=5), st.lists(st.integers(-20, 20), min_size=1, max_size=3))
def test_root_valuations_match_charpoly_oracle(f, wlow):
    # W = X^k + 3 * (random) is distinguished over Q_3
    W = [3 * c for c in wlow] + [1]
    if W[0] == 0:
        W[0] = 3
    F = TruncSeries(Q3, f)
    got = root_valuations(F, TruncSeries(Q3, W))
    cp = oracles.charpoly_mod(W, f)
    want = sorted(oracles.np_root_vals(cp, 3), key=lambda v: (v is None, v or 0))
    assert [None if v.is_infinite else v.value for v in got] == want


def test_root_valuations_sum_is_resultant():
    W = TruncSeries(Q2, [2, 2, 1])  # Eisenstein, roots of valuation 1/2
    f = TruncSeries(Q2, [1, 3, 5])
    vals = root_valuations(f, W)
    res = resultant(W, f)
    assert sum(v.value for v in vals) == res.val().value


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=5), st.integers(1, 12))
def test_power_sums(cs, K):
    cs = cs[:-1] + [1]
    want = oracles.power_sums(cs, K)
    got = [x.rational() for x in power_sums([Q2(c) for c in cs], K)]
    assert got == want


@st.composite
def distinguishable(draw, F=Q2):
    w = draw(st.integers(0, 6))
    extra = draw(st.integers(0, 5))
    cs = []
    for j in range(w + extra + 1):
        c = draw(st.integers(0, 2**12))
        if j < w:
            c *= 2
        elif j == w:
            c = 2 * c + 1
        cs.append(c)
    return TruncSeries(F, cs), w


@given(distinguishable())
def test_weierstrass_prep_reconstructs(fw):
    f, w = fw
    N, M = 12, 12
    W, U = weierstrass_prep(f, N=N, M=M)
    assert W.degree == w
    assert (W[w] - Q2(1)).is_zero()
    for c in W.coeffs[:-1]:
        assert c.val().value >= 1 if not c.val().is_infinite else True
    assert U[0].val() == Exact(0)
    res = (U * W).truncate(M) - f.truncate(M)
    for c in res.coeffs:
        assert c.is_zero()


def test_weierstrass_divide_remainder():
    f = TruncSeries(Q2, [2, 1])  # X + 2
    g = TruncSeries(Q2, [1, 1, 1])  # X^2 + X + 1 = (X + 2)(X - 1) + 3
    Q, R = weierstrass_divide(g, f, 20, 8)
    assert (R[0] - Q2(3)).is_zero()
    assert (Q[0] + Q2(1)).is_zero() and (Q[1] - Q2(1)).is_zero()


def test_weierstrass_truncated_input():
    f = TruncSeries(Q2, [2, 4, 1, 1, 3], 5, tail_val=0)
    W, U = weierstrass_prep(f, N=10, M=5)
    assert W.degree == 2
    res = (U * W).truncate(5) - f
    assert all(c.is_zero() for c in res.coeffs)


def test_weierstrass_over_eisenstein():
    pi = E3.pi
    f = TruncSeries(E3, [pi * 2, pi, E3.one() + pi, 1])
    W, U = weierstrass_prep(f, N=8, M=8)
    assert W.degree == 2
    res = (U * W).truncate(8) - f.truncate(8)
    assert all(c.is_zero() for c in res.coeffs)


def test_v_profile():
    prof = v_profile([Exact(Fraction(1, 2)), Exact(Fraction(1, 2)), Exact(1)])
    assert prof(0) == Fraction(-2)
    assert prof(Fraction(1, 2)) == Fraction(-1, 2)
    assert prof(2) == 0
    # monic W: V(W, mu) = sum_r min(mu, val r) = sum_r val r + profile(mu)
    W = TruncSeries(Q2, [2, 2, 1])
    for mu in (0, Fraction(1, 4), Fraction(1, 2), 1):
        assert gauss_V(W, mu).value == v_profile([Fraction(1, 2)] * 2)(mu) + 1


@given(st.lists(st.integers(-(3**10), 3**10), min_size=1, max_size=6), st.integers(0, 5))
def test_json_roundtrip(cs, tail):
    f = TruncSeries(E3, [E3.from_coords([c, c // 3]) for c in cs], len(cs), tail)
    g = series_from_json(series_to_json(f))
    assert g.order == f.order and g.tail_val == f.tail_val
    assert all((a - b).is_zero() and a.prec == b.prec for a, b in zip(f.coeffs, g.coeffs))


def test_series_inverse_and_compose():
    f = TruncSeries(Q3, [1, 3, 9, 1], 8)
    g = f.inverse(8)
    one = (f * g).truncate(8)
    assert (one[0] - Q3(1)).is_zero() and all(c.is_zero() for c in one.coeffs[1:])
    X = TruncSeries.X(Q3, 8)
    assert f.compose(X) == f
