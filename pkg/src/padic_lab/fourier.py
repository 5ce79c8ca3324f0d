"""Finite-level Fourier analysis on O_F/p^n, Mahler expansions and friends.

Character values live in ``C_n = Q_p(zeta_{p^n})``, represented as
``Q_p[x]/(Phi_{p^n}(1+x))`` with ``zeta = 1 + x``; that polynomial is
Eisenstein, so :class:`~padic_lab.padics.LocalField` handles it directly.

A character of ``O_F/p^n`` is indexed by an exponent tuple ``k``:
``chi_k(a) = zeta^(k_1 c_1(a) + ... + k_d c_d(a))`` where ``c_i`` are the
linear forms dual to a chosen Z_p-basis of ``O_F``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .ltlike import psi as _psi
from .lubintate import FormalModule, lt_mult, pn_polys
from .padics import (
    INFINITE,
    ExtElem,
    LocalField,
    Qp,
    ValResult,
    field_create,
    vmin,
    vp_frac,
)
from .powseries import TruncSeries, gauss_V

__all__ = [
    "FiniteFunction",
    "CharCoeffs",
    "MahlerSeq",
    "FiniteMeasure",
    "cyclotomic_field",
    "dual_basis",
    "fourier_forward",
    "fourier_forward_tensor",
    "fourier_invert",
    "mahler_coeffs",
    "mahler_eval",
    "binom",
    "peano_map",
    "amice",
    "tprime_image",
    "isometry_check",
    "psi_bounded_test",
]


# --------------------------------------------------------------------------
# cyclotomic fields
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_field(p: int, n: int) -> LocalField:
    """``Q_p[x]/(Phi_{p^n}(1+x))``; ``Q_p`` itself for ``n = 0``."""
    if n == 0:
        return Qp(p)
    # Phi_{p^n}(Y) = sum_{j<p} Y^(j p^(n-1)); substitute Y = 1 + x
    m = p ** (n - 1)
    deg = (p - 1) * m
    coeffs = [0] * (deg + 1)
    for j in range(p):
        e = j * m
        for i in range(e + 1):
            coeffs[i] += math.comb(e, i)
    return field_create(p, coeffs, "Eisenstein")


@lru_cache(maxsize=None)
def _zeta_powers(p: int, n: int) -> tuple:
    C = cyclotomic_field(p, n)
    if n == 0:
        return (C.one(),)
    z = C.one() + C.gen
    out = [C.one()]
    for _ in range(p**n - 1):
        out.append(out[-1] * z)
    return tuple(out)


# --------------------------------------------------------------------------
# dual bases
# --------------------------------------------------------------------------


def _mat_inv(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular basis matrix")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


@dataclass(frozen=True)
class DualBasis:
    """Linear forms ``c_i`` with ``c_i(a_j) = delta_ij``; rows act on power-basis coordinates."""

    field: LocalField
    basis: tuple
    forms: tuple  # d x d rational matrix

    def __call__(self, x) -> tuple:
        xs = x.coords() if isinstance(x, ExtElem) else [Fraction(c) for c in x]
        return tuple(sum((r * c for r, c in zip(row, xs)), Fraction(0)) for row in self.forms)

    def mod(self, x, N: int) -> tuple:
        """``c_i(x) mod N`` (``x`` integral, so each ``c_i(x)`` is p-integral)."""
        out = []
        for c in self(x):
            out.append(c.numerator * pow(c.denominator, -1, N) % N)
        return tuple(out)


def dual_basis(F: LocalField, basis: Sequence | None = None) -> DualBasis:
    """Dual forms of a Z_p-basis of ``O_F`` (default: the power basis)."""
    basis = tuple(F.basis() if basis is None else [b if isinstance(b, ExtElem) else F(b) for b in basis])
    d = F.d
    if len(basis) != d:
        raise ValueError(f"need {d} basis elements")
    A = [[basis[j].coords()[i] for j in range(d)] for i in range(d)]
    p = F.p
    for row in A:
        for x in row:
            if x != 0 and vp_frac(x, p) < 0:
                raise ValueError("basis elements must be integral")
    inv = _mat_inv(A)
    for row in inv:
        for x in row:
            if x != 0 and vp_frac(x, p) < 0:
                raise ValueError("not a Z_p-basis of O_F (determinant is not a unit)")
    return DualBasis(F, basis, tuple(tuple(r) for r in inv))


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------


@dataclass
class FiniteFunction:
    """Values on ``O_F/p^n``, indexed by power-basis coordinates mod ``p^n``."""

    F: LocalField
    level: int
    values: dict

    @property
    def field(self) -> LocalField:
        return cyclotomic_field(self.F.p, self.level)

    def sup_val(self) -> ValResult:
        return vmin(v.val() for v in self.values.values())


@dataclass
class CharCoeffs:
    """Coefficients ``z_k`` indexed by exponent tuples ``k`` mod ``p^n``."""

    F: LocalField
    level: int
    coeffs: dict
    dual: DualBasis | None = None

    def sup_val(self) -> ValResult:
        return vmin(v.val() for v in self.coeffs.values())


def group_elements(F: LocalField, n: int) -> list[tuple]:
    return list(itertools.product(range(F.p**n), repeat=F.d))


def _coerce(C: LocalField, v) -> ExtElem:
    if isinstance(v, ExtElem):
        if v.field == C:
            return v
        if v.field.d == 1:
            return C.from_coords([v.coords()[0]], v.prec)
        raise ValueError("value lies in the wrong field")
    return C(v)


def fourier_forward(z: CharCoeffs) -> FiniteFunction:
    """``f(a) = sum_k z_k chi_k(a)``."""
    F, n = z.F, z.level
    p = F.p
    N = p**n
    C = cyclotomic_field(p, n)
    zp = _zeta_powers(p, n)
    dual = z.dual or dual_basis(F)
    out = {}
    coeffs = [(k, _coerce(C, v)) for k, v in z.coeffs.items()]
    for a in group_elements(F, n):
        ca = dual.mod(a, N)
        acc = C.zero()
        for k, v in coeffs:
            e = sum(ki * ci for ki, ci in zip(k, ca)) % N
            acc = acc + v * zp[e]
        out[a] = acc
    return FiniteFunction(F, n, out)


def fourier_invert(f: FiniteFunction, dual: DualBasis | None = None) -> CharCoeffs:
    """``z_k = p^(-nd) sum_a f(a) chi_k(a)^(-1)`` (orthogonality)."""
    F, n = f.F, f.level
    p = F.p
    N = p**n
    C = cyclotomic_field(p, n)
    zp = _zeta_powers(p, n)
    dual = dual or dual_basis(F)
    vals = [(dual.mod(a, N), _coerce(C, v)) for a, v in f.values.items()]
    scale = Fraction(1, N**F.d)
    out = {}
    for k in itertools.product(range(N), repeat=F.d):
        acc = C.zero()
        for ca, v in vals:
            e = -sum(ki * ci for ki, ci in zip(k, ca)) % N
            acc = acc + v * zp[e]
        out[k] = acc.scale(scale)
    return CharCoeffs(F, n, out, dual)


def fourier_forward_tensor(z: CharCoeffs) -> FiniteFunction:
    """Same transform as :func:`fourier_forward`, one dual coordinate at a time."""
    F, n = z.F, z.level
    p = F.p
    N = p**n
    d = F.d
    C = cyclotomic_field(p, n)
    zp = _zeta_powers(p, n)
    dual = z.dual or dual_basis(F)
    # table over (k_1..k_d); transform axis i turns k_i into the coordinate x_i
    table = {k: _coerce(C, v) for k, v in z.coeffs.items()}
    for k in itertools.product(range(N), repeat=d):
        table.setdefault(k, C.zero())
    for axis in range(d):
        new = {}
        for idx in itertools.product(range(N), repeat=d):
            acc = C.zero()
            for j in range(N):
                src = idx[:axis] + (j,) + idx[axis + 1 :]
                acc = acc + table[src] * zp[(j * idx[axis]) % N]
            new[idx] = acc
        table = new
    out = {a: table[dual.mod(a, N)] for a in group_elements(F, n)}
    return FiniteFunction(F, n, out)


# --------------------------------------------------------------------------
# Mahler, Amice, Peano
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MahlerSeq:
    coeffs: tuple

    def __len__(self):
        return len(self.coeffs)


def binom(x, n: int):
    """``x(x-1)...(x-n+1)/n!`` for rational or integer ``x``."""
    if isinstance(x, int) and x >= 0:
        return math.comb(x, n)
    x = Fraction(x)
    acc = Fraction(1)
    for i in range(n):
        acc = acc * (x - i) / (i + 1)
    return acc


def mahler_coeffs(values: Sequence) -> MahlerSeq:
    """Forward differences at 0 of ``f(0), ..., f(K)``."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return MahlerSeq(tuple(out))


def mahler_eval(lam: MahlerSeq, x):
    acc = 0
    for n, c in enumerate(lam.coeffs):
        b = binom(x, n)
        if b:
            acc = acc + c * b
    return acc


@dataclass
class PeanoResult:
    values: dict
    verified: bool
    note: str = ""


def peano_map(lam: MahlerSeq, M: FormalModule, points: Iterable, omega=None) -> PeanoResult:
    """``a -> sum_n lam_n P_n(a*Omega)`` on the given points of ``O_F``.

    For the multiplicative model over Q_p the period is 1 and the result is
    verified.  Elsewhere ``omega`` must be supplied and the output is marked
    unverified.
    """
    F = M.F
    verified = F.kind == "Qp" and M.multiplicative
    if omega is None:
        if not verified:
            raise ValueError("a period approximation is required unless F = Q_p with the multiplicative [p]")
        omega = F.one()
    omega = omega if isinstance(omega, ExtElem) else F(omega)
    K = len(lam) - 1
    if M.M <= K:
        M = FormalModule(F, M.P, M=K + 2, N=M.N)
    P = pn_polys(M, K)
    out = {}
    for a in points:
        a_el = a if isinstance(a, ExtElem) else F(a)
        y = a_el * omega
        acc = F.zero()
        for n, c in enumerate(lam.coeffs):
            if c:
                acc = acc + P.evaluate(n, y) * (c if isinstance(c, ExtElem) else F(c))
        out[a] = acc
    return PeanoResult(out, verified, "" if verified else "unverified period")


@dataclass(frozen=True)
class FiniteMeasure:
    """``sum c_b delta_b`` with finitely many points ``b``."""

    masses: tuple  # ((b, c_b), ...)


def amice(mu: FiniteMeasure, p: int, order: int) -> TruncSeries:
    """``sum_b c_b (1+X)^b`` truncated at ``X^order``."""
    F = Qp(p)
    acc = TruncSeries(F, [], order)
    for b, c in mu.masses:
        ser = TruncSeries(F, [binom(b, n) for n in range(order)], order)
        acc = acc + ser.scale(F(c))
    return acc


def tprime_image(b, M: FormalModule, G: TruncSeries | None = None) -> TruncSeries:
    """``1 + G([b](X))``; ``G = X`` for the multiplicative model over Q_p."""
    if G is None:
        if not (M.F.kind == "Qp" and M.multiplicative):
            raise ValueError("G must be supplied unless F = Q_p with the multiplicative [p]")
        G = TruncSeries.X(M.F)
    Gb = G.compose(lt_mult(M, b))
    return TruncSeries.const(M.F, 1, Gb.order) + Gb


def isometry_check(mu: FiniteMeasure, M: FormalModule, G: TruncSeries | None = None) -> dict:
    """Measure norm ``min val c_b`` against ``V(sum c_b T'(delta_b), 0)``."""
    F = M.F
    pts = [b for b, _ in mu.masses]
    if len(set(pts)) != len(pts):
        raise ValueError("support points must be distinct")
    lhs = vmin([F(c).val() for _, c in mu.masses]) if mu.masses else INFINITE
    acc = None
    for b, c in mu.masses:
        img = tprime_image(b, M, G).scale(F(c))
        acc = img if acc is None else acc + img
    rhs = gauss_V(acc, 0) if acc is not None else INFINITE
    verified = F.kind == "Qp" and M.multiplicative and G is None
    equal = lhs == rhs if (lhs.is_exact or lhs.is_infinite) and (rhs.is_exact or rhs.is_infinite) else None
    return {"measure_val": lhs, "series_val": rhs, "equal": equal, "verified": verified}


def psi_bounded_test(f: TruncSeries, M: FormalModule, a_set: Iterable, n_max: int, G: TruncSeries | None = None) -> list[dict]:
    """Rows ``{a, n, val}`` with ``val = V(q^(-n) psi^n((1 + G([a]X)) f), 0)``."""
    L = M.L
    rows = []
    for a in a_set:
        if G is None and M.multiplicative and isinstance(a, int) and a >= 0:
            # exact polynomial (1+X)^a avoids truncating the input
            g = TruncSeries(M.F, [math.comb(a, i) for i in range(a + 1)])
        else:
            g = tprime_image(a, M, G)
        h = g * f
        cur = h
        for n in range(1, n_max + 1):
            cur = _psi(L, cur)
            v = gauss_V(cur, 0)
            shift = n * M.F(L.q).val().value
            rows.append({"a": a, "n": n, "val": v if v.is_infinite else v - shift})
    return rows
