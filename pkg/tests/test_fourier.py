import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic_lab.fourier import (
    CharCoeffs,
    FiniteFunction,
    FiniteMeasure,
    amice,
    binom,
    cyclotomic_field,
    dual_basis,
    fourier_forward,
    fourier_forward_tensor,
    fourier_invert,
    group_elements,
    isometry_check,
    mahler_coeffs,
    mahler_eval,
    peano_map,
    psi_bounded_test,
    tprime_image,
)
from padic_lab.lubintate import FormalModule
from padic_lab.padics import Exact, INFINITE, Qp, field_create, val_ge
from padic_lab.powseries import TruncSeries

Q2, Q3 = Qp(2), Qp(3)
E3 = field_create(3, [-3, 0, 1], "Eisenstein")
U2 = field_create(2, [1, 1, 1], "Unramified")
MULT2 = FormalModule(Q2, M=12)
MULT3 = FormalModule(Q3, TruncSeries(Q3, [0, 3, 3, 1]), M=12)


def test_cyclotomic_field():
    C = cyclotomic_field(3, 2)
    assert C.d == 6 and C.e == 6
    z = C.one() + C.gen
    assert ((z ** 9) - C.one()).is_zero()
    assert not ((z ** 3) - C.one()).is_zero()
    assert (C.gen).val() == Exact(Fraction(1, 6))


def test_indicator_of_zero():
    z = CharCoeffs(Q2, 1, {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})
    f = fourier_forward(z)
    assert [f.values[(a,)].rational() for a in (0, 1)] == [1, 0]


def test_dual_basis():
    db = dual_basis(E3, [E3.from_coords([1, 1]), E3.from_coords([0, 1])])
    assert db(E3.from_coords([1, 1])) == (1, 0)
    assert db(E3.from_coords([2, 5])) == (2, 3)
    with pytest.raises(ValueError):
        dual_basis(E3, [E3.from_coords([3, 0]), E3.from_coords([0, 1])])


def _rand_table(F, n, rng):
    C = cyclotomic_field(F.p, n)
    return FiniteFunction(F, n, {a: C.from_coords([rng.randint(-20, 20) for _ in range(C.d)]) for a in group_elements(F, n)})


@pytest.mark.parametrize("F,n", [(Q2, 1), (Q2, 2), (Q3, 1), (Q3, 2), (U2, 1), (E3, 1)], ids=str)
@settings(max_examples=3)
@given(seed=st.integers(0, 10**6))
def test_roundtrips_and_tensor(F, n, seed):
    import random

    rng = random.Random(seed)
    f = _rand_table(F, n, rng)
    z = fourier_invert(f)
    back = fourier_forward(z)
    assert all((back.values[a] - f.values[a]).is_zero() for a in f.values)
    tens = fourier_forward_tensor(z)
    assert all((tens.values[a] - back.values[a]).is_zero() for a in f.values)
    # sup norm of a transform never exceeds the coefficient norm
    assert val_ge(back.sup_val(), z.sup_val()) is True


def test_nonstandard_basis_roundtrip():
    db = dual_basis(E3, [E3.from_coords([1, 1]), E3.from_coords([0, 1])])
    import random

    f = _rand_table(E3, 1, random.Random(3))
    z = fourier_invert(f, db)
    back = fourier_forward(z)
    assert all((back.values[a] - f.values[a]).is_zero() for a in f.values)


def test_mahler_examples():
    assert mahler_coeffs([0, 1, 4]).coeffs == (0, 1, 2)
    lam = mahler_coeffs([k * k for k in range(6)])
    assert lam.coeffs[3:] == (0, 0, 0)
    assert mahler_eval(lam, Fraction(1, 2)) == Fraction(1, 4)


@given(st.lists(st.integers(-(10**6), 10**6), min_size=1, max_size=33))
def test_mahler_roundtrip(vals):
    lam = mahler_coeffs(vals)
    assert [mahler_eval(lam, x) for x in range(len(vals))] == vals
    # forward differences agree with the explicit binomial sum
    for n, c in enumerate(lam.coeffs):
        assert c == sum((-1) ** (n - k) * math.comb(n, k) * vals[k] for k in range(n + 1))


def test_binom_general():
    assert binom(Fraction(-1), 3) == -1
    assert binom(5, 2) == 10


@settings(max_examples=10)
@given(st.lists(st.integers(-(2**8), 2**8), min_size=1, max_size=10))
def test_peano_identity_qp(vals):
    lam = mahler_coeffs(vals)
    res = peano_map(lam, MULT2, range(len(vals)))
    assert res.verified
    assert [res.values[x].rational() for x in range(len(vals))] == vals


def test_peano_needs_period_off_qp():
    M = FormalModule(E3, M=6)
    with pytest.raises(ValueError):
        peano_map(mahler_coeffs([1, 2]), M, [0, 1])
    res = peano_map(mahler_coeffs([1, 2]), M, [0, 1], omega=E3.one())
    assert not res.verified


def test_amice_examples():
    s = amice(FiniteMeasure(((1, 1), (0, -1))), 2, 5)
    assert [c.rational() for c in s.coeffs] == [0, 1, 0, 0, 0]
    r = isometry_check(FiniteMeasure(((1, 1), (0, -1))), MULT2)
    assert r["measure_val"] == Exact(0) and r["series_val"] == Exact(0) and r["equal"]


@settings(max_examples=15)
@given(st.dictionaries(st.integers(0, 9), st.integers(1, 3**6), min_size=1, max_size=4))
def test_amice_isometry(masses):
    mu = FiniteMeasure(tuple(sorted(masses.items())))
    r = isometry_check(mu, MULT3)
    assert r["equal"] and r["verified"]


@given(st.integers(0, 40), st.integers(0, 40))
def test_tprime_is_a_homomorphism(a, b):
    lhs = tprime_image(a + b, MULT2)
    rhs = (tprime_image(a, MULT2) * tprime_image(b, MULT2)).truncate(MULT2.M)
    assert lhs == rhs


def test_psi_bounded_examples():
    one = TruncSeries(Q2, [1])
    rows = psi_bounded_test(one, MULT2, [0, 1, 2, 3], 3)
    assert all(r["val"].is_infinite or r["val"].value >= 0 for r in rows)
    # a = 1: psi(1+X) = 0 for p = 2
    assert next(r for r in rows if r["a"] == 1 and r["n"] == 1)["val"] is INFINITE
    zero = TruncSeries(Q2, [])
    assert all(r["val"] is INFINITE for r in psi_bounded_test(zero, MULT2, [0, 1], 2))


@settings(max_examples=10)
@given(st.lists(st.integers(0, 3**6), min_size=1, max_size=5))
def test_psi_bounded_random_qp(cs):
    rows = psi_bounded_test(TruncSeries(Q3, cs), MULT3, range(4), 3)
    assert all(r["val"].is_infinite or r["val"].value >= 0 for r in rows)
