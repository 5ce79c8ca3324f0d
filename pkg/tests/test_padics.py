from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_lab.padics import (
    INFINITE,
    AtLeast,
    Exact,
    PadicApprox,
    PrecisionError,
    Qp,
    ext_charpoly,
    field_create,
    padic_from_int,
    val_ge,
    vmin,
    vp,
)

import oracles

FIELDS = [
    Qp(2),
    Qp(3),
    field_create(3, [-3, 0, 1], "Eisenstein"),
    field_create(2, [2, 2, 1], "Eisenstein"),
    field_create(2, [1, 1, 1], "Unramified"),
    field_create(5, [2, 0, 1], "Unramified"),
]

nonzero_ints = st.integers(-(10**30), 10**30).filter(bool)


@given(nonzero_ints, st.sampled_from([2, 3, 5, 7]))
def test_vp_matches_naive(n, p):
    assert vp(n, p) == oracles.vp_rational(n, p)


def test_vp_zero_raises():
    with pytest.raises(ValueError):
        vp(0, 3)


def test_field_invariants():
    E = FIELDS[2]
    assert (E.e, E.f, E.q, E.val_pi) == (2, 1, 3, Fraction(1, 2))
    U = FIELDS[4]
    assert (U.e, U.f, U.q) == (1, 2, 4)
    with pytest.raises(ValueError):
        field_create(3, [3, 0, 1], "Unramified")  # reducible mod 3
    with pytest.raises(ValueError):
        field_create(2, [4, 0, 1], "Eisenstein")


coords_st = st.lists(st.integers(-(3**12), 3**12), min_size=2, max_size=2)


@pytest.mark.parametrize("F", FIELDS, ids=repr)
@given(data=st.data())
def test_valuation_matches_norm(F, data):
    cs = data.draw(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=12), min_size=F.d, max_size=F.d))
    x = F.from_coords(cs)
    v = x.val()
    want = oracles.ext_valuation(F, cs)
    if want is None:
        assert v is INFINITE
    else:
        assert v == Exact(want)


@pytest.mark.parametrize("F", FIELDS, ids=repr)
@given(data=st.data())
def test_ring_laws_and_inverse(F, data):
    def el():
        return F.from_coords(data.draw(st.lists(st.integers(-1000, 1000), min_size=F.d, max_size=F.d)))

    a, b, c = el(), el(), el()
    assert (a * (b + c) - (a * b + a * c)).is_zero()
    assert ((a * b) * c - a * (b * c)).is_zero()
    assert (a * b - b * a).is_zero()
    if not a.is_zero():
        assert (a * a.inverse() - F.one()).is_zero()
        # valuation is multiplicative
        assert (a * b).val() == a.val() + b.val() or b.is_zero()


@pytest.mark.parametrize("F", FIELDS[2:], ids=repr)
def test_charpoly_constant_term_is_norm(F):
    x = F.from_coords([5, 7])
    cp = ext_charpoly(x)
    n = cp[0].rational() * (-1) ** F.d
    assert n == oracles.norm(F.g, [Fraction(5), Fraction(7)])


def test_capped_precision():
    F = Qp(2)
    x = F(1, prec=10)
    y = F(1 + 2**10, prec=12)
    d = x - y
    # equal mod 2^10
    assert d.is_zero()
    assert d.val() == AtLeast(10)
    # a valuation certified below the cap stays exact
    assert (F(12, prec=10)).val() == Exact(2)


def test_valresult_helpers():
    assert vmin([Exact(3), AtLeast(2)]) == AtLeast(2)
    assert vmin([Exact(1), AtLeast(2)]) == Exact(1)
    assert vmin([]) is INFINITE
    assert val_ge(Exact(2), 1) is True
    assert val_ge(AtLeast(1), 2) is None
    assert val_ge(Exact(0), AtLeast(1)) is False


@given(st.integers(0, 2**40), st.integers(0, 2**40), st.integers(1, 20))
def test_padic_approx_ring(a, b, N):
    A, B = padic_from_int(2, a, N), padic_from_int(2, b, N)
    assert A + B == padic_from_int(2, a + b, N)
    assert A * B == padic_from_int(2, a * b, N)
    assert (A - B) == padic_from_int(2, a - b, N)


def test_padic_approx_valuation():
    assert PadicApprox(3, 0, 5).valuation() == AtLeast(5)
    assert padic_from_int(3, 18, 5).valuation() == Exact(2)
    assert padic_from_int(3, 0, 5).valuation() is INFINITE
