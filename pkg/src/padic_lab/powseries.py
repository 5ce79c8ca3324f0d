"""Truncated power series over p-adic fields.

A :class:`TruncSeries` is either a polynomial (``order=None``, tail exactly
zero) or a series known modulo ``X^order`` whose unknown coefficients all have
valuation at least ``tail_val``.  Every operation that could be affected by the
unknown tail lowers the precision of the affected coefficients instead of
silently dropping the tail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .padics import (
    INFINITE,
    AtLeast,
    Exact,
    ExtElem,
    LocalField,
    PrecisionError,
    Qp,
    ValResult,
    charpoly_matrix,
    field_create,
    vmin,
)

__all__ = [
    "TruncSeries",
    "NewtonPolygon",
    "VProfile",
    "series_arith",
    "gauss_V",
    "newton_polygon",
    "wideg",
    "weierstrass_prep",
    "weierstrass_divide",
    "root_valuations",
    "v_profile",
    "resultant",
    "mult_charpoly",
    "poly_divmod",
    "power_sums",
    "embed",
    "series_to_json",
    "series_from_json",
]


def embed(c: ExtElem, K: LocalField) -> ExtElem:
    """View ``c`` inside ``K`` (identity, or Q_p constants into any field)."""
    if c.field == K:
        return c
    if c.field.d == 1:
        return K.from_coords([c.coords()[0]], c.prec)
    raise ValueError(f"no embedding of {c.field} into {K}")


def _lower(c: ExtElem) -> Fraction | None:
    """Certified lower bound on val(c); ``None`` for an exact zero."""
    v = c.center_val()
    if v is None:
        return c.prec
    return v


class TruncSeries:
    """Power series ``sum f_i X^i`` with coefficients in a :class:`LocalField`."""

    __slots__ = ("field", "coeffs", "order", "tail_val")

    def __init__(self, field: LocalField, coeffs: Iterable, order: int | None = None, tail_val=0):
        self.field = field
        cs = [c if isinstance(c, ExtElem) else field(c) for c in coeffs]
        if order is None:
            while cs and cs[-1].is_zero() and cs[-1].prec is None:
                cs.pop()
        else:
            cs = cs[:order]
            cs += [field.zero()] * (order - len(cs))
        self.coeffs = tuple(cs)
        self.order = order
        self.tail_val = Fraction(tail_val)

    # constructors ----------------------------------------------------------
    @classmethod
    def X(cls, field: LocalField, order=None) -> "TruncSeries":
        return cls(field, [0, 1], order)

    @classmethod
    def const(cls, field: LocalField, c, order=None) -> "TruncSeries":
        return cls(field, [c], order)

    # queries -----------------------------------------------------------------
    @property
    def is_poly(self) -> bool:
        return self.order is None

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        if not self.is_poly:
            raise ValueError("degree of a truncated series")
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> ExtElem:
        if i < len(self.coeffs):
            return self.coeffs[i]
        if self.is_poly:
            return self.field.zero()
        raise IndexError(f"coefficient {i} lies beyond the truncation order {self.order}")

    def val_lower(self) -> Fraction | None:
        """Lower bound on the valuation of every coefficient (tail included)."""
        vals = [_lower(c) for c in self.coeffs]
        vals = [v for v in vals if v is not None]
        if not self.is_poly:
            vals.append(self.tail_val)
        return min(vals) if vals else None

    def is_integral(self) -> bool:
        v = self.val_lower()
        return v is None or v >= 0

    def _eff_order(self):
        return math.inf if self.order is None else self.order

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c.is_zero() or c.prec is not None:
                terms.append(f"({c})*X^{i}")
        s = " + ".join(terms) or "0"
        if not self.is_poly:
            s += f" + O(X^{self.order})"
        return s

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self._eff_order(), other._eff_order())
        if n == math.inf:
            n = max(len(self), len(other))
        return all((self[i] - other[i]).is_zero() for i in range(n))

    __hash__ = None

    # arithmetic --------------------------------------------------------------
    def _combine_order(self, other):
        if self.is_poly and other.is_poly:
            return None
        return int(min(self._eff_order(), other._eff_order()))

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(self.field, other)
        order = self._combine_order(other)
        n = max(len(self), len(other)) if order is None else order
        cs = [self[i] + other[i] for i in range(n)]
        return TruncSeries(self.field, cs, order, min(self.tail_val, other.tail_val))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.field, [-c for c in self.coeffs], self.order, self.tail_val)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(self.field, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        c = c if isinstance(c, ExtElem) else self.field(c)
        cv = _lower(c)
        tail = self.tail_val + (cv if cv is not None else 0)
        return TruncSeries(self.field, [c * a for a in self.coeffs], self.order, tail)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        order = self._combine_order(other)
        a, b = self.coeffs, other.coeffs
        n = (len(a) + len(b) - 1 if a and b else 0) if order is None else order
        out = [self.field.zero()] * n
        for i, x in enumerate(a):
            if i >= n:
                break
            if x.is_zero() and x.prec is None:
                continue
            for j in range(min(len(b), n - i)):
                y = b[j]
                if y.is_zero() and y.prec is None:
                    continue
                out[i + j] = out[i + j] + x * y
        tail = 0
        if order is not None:
            la, lb = self.val_lower(), other.val_lower()
            tail = (la or 0) + (lb or 0) if la is not None and lb is not None else 0
        return TruncSeries(self.field, out, order, tail)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = TruncSeries.const(self.field, 1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, M: int) -> "TruncSeries":
        M = int(min(M, self._eff_order()))
        return TruncSeries(self.field, self.coeffs[:M], M, self.tail_val)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``X^k``."""
        z = [self.field.zero()] * k
        order = None if self.is_poly else self.order + k
        return TruncSeries(self.field, z + list(self.coeffs), order, self.tail_val)

    def derivative(self) -> "TruncSeries":
        order = None if self.is_poly else max(self.order - 1, 0)
        return TruncSeries(
            self.field, [c.scale(i) for i, c in enumerate(self.coeffs) if i], order, self.tail_val
        )

    def change_ring(self, K: LocalField) -> "TruncSeries":
        return TruncSeries(K, [embed(c, K) for c in self.coeffs], self.order, self.tail_val)

    def inverse(self, M: int | None = None) -> "TruncSeries":
        """Multiplicative inverse modulo ``X^M`` (constant term must be invertible)."""
        if M is None:
            if self.is_poly:
                raise ValueError("give an order for the inverse of a polynomial")
            M = self.order
        M = int(min(M, self._eff_order()))
        a0inv = self[0].inverse()
        out = [a0inv]
        for k in range(1, M):
            s = self.field.zero()
            for j in range(1, min(k, len(self) - 1) + 1):
                s = s + self[j] * out[k - j]
            out.append(-(s * a0inv))
        return TruncSeries(self.field, out, M, self.tail_val)

    def compose(self, g: "TruncSeries", max_order: int | None = None) -> "TruncSeries":
        return series_arith(self, g, "compose", max_order=max_order)

    def __call__(self, x: ExtElem) -> ExtElem:
        return evaluate(self, x)


def evaluate(f: TruncSeries, x: ExtElem) -> ExtElem:
    """``f(x)`` for ``x`` in ``f.field`` or in a field containing Q_p constants."""
    K = x.field
    acc = K.zero()
    for c in reversed(f.coeffs):
        acc = acc * x + embed(c, K)
    if not f.is_poly:
        vx = _lower(x)
        if vx is None:
            return acc if not f.coeffs else embed(f.coeffs[0], K)
        if vx <= 0:
            raise PrecisionError("truncated series evaluated outside the open disk")
        acc = acc.add_prec(f.tail_val + f.order * vx)
    return acc


def series_arith(f: TruncSeries, g, op: str, max_order: int | None = None) -> TruncSeries:
    """``add``, ``mul``, ``scalar`` (g a field element) or ``compose`` (f∘g)."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scalar":
        return f.scale(g)
    if op != "compose":
        raise ValueError(f"unknown op {op!r}")
    g0 = g[0] if len(g) else g.field.zero()
    v0 = _lower(g0)
    if v0 is not None and v0 <= 0 and not (g0.is_zero() and g0.prec is None):
        raise ValueError("composition needs val(g(0)) > 0")
    g0_exact_zero = g0.is_zero() and g0.prec is None
    if g0_exact_zero:
        if f.is_poly and g.is_poly:
            order = None if max_order is None else max_order
        else:
            order = int(min(f._eff_order(), g._eff_order()))
            if max_order is not None:
                order = min(order, max_order)
    else:
        if not f.is_poly and not g.is_integral():
            raise ValueError("composition with a truncated outer series needs integral g")
        order = None if g.is_poly else g.order
        if max_order is not None:
            order = max_order if order is None else min(order, max_order)
    acc = TruncSeries(g.field, [], order)
    gg = g if order is None else g.truncate(order)
    for c in reversed(f.coeffs):
        acc = acc * gg + TruncSeries.const(g.field, c, order)
    if order is not None and f.is_poly and g.is_poly and g0_exact_zero:
        acc = TruncSeries(acc.field, acc.coeffs, order, acc.tail_val)
    if not f.is_poly and not g0_exact_zero:
        # the unknown tail of f contributes sum_{i >= M} f_i g^i
        M = f.order
        cs = []
        for k, c in enumerate(acc.coeffs):
            cap = f.tail_val + max(M - k, 0) * (v0 if v0 is not None else 0)
            cs.append(c.add_prec(cap))
        acc = TruncSeries(acc.field, cs, acc.order, min(acc.tail_val, f.tail_val))
    return acc


# --------------------------------------------------------------------------
# Gauss valuations and Newton polygons
# --------------------------------------------------------------------------


def gauss_V(f: TruncSeries, mu, tail_val=None) -> ValResult:
    """``min_i val(f_i) + mu*i`` with the truncation tail accounted for."""
    mu = Fraction(mu)
    if mu < 0:
        raise ValueError("mu must be >= 0")
    vals = []
    for i, c in enumerate(f.coeffs):
        v = c.val()
        vals.append(v + mu * i if not v.is_infinite else v)
    if not f.is_poly:
        tv = f.tail_val if tail_val is None else Fraction(tail_val)
        vals.append(AtLeast(tv + mu * f.order))
    return vmin(vals)


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(i, val f_i)``."""

    vertices: tuple  # ((i, v, exact), ...)
    lower_bound: bool  # some point used only a lower bound on its valuation

    @property
    def start(self) -> int:
        return self.vertices[0][0] if self.vertices else 0

    def segments(self) -> list[tuple[Fraction, int]]:
        """``(slope, horizontal length)`` pairs, slopes increasing."""
        out = []
        for (i0, v0, _), (i1, v1, _) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v1 - v0) / (i1 - i0), i1 - i0))
        return out

    def root_valuations(self) -> list[tuple[Fraction, int]]:
        """Critical valuations (negated slopes) with their zero counts."""
        return [(-s, n) for s, n in self.segments()]

    def segment_exact(self) -> list[bool]:
        return [a[2] and b[2] for a, b in zip(self.vertices, self.vertices[1:])]


def _hull(points):
    pts = sorted(points)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1, _), (x2, y2, _) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(f) -> NewtonPolygon:
    """Newton polygon of a series or of a coefficient list."""
    coeffs = f.coeffs if isinstance(f, TruncSeries) else list(f)
    pts = []
    lower = False
    for i, c in enumerate(coeffs):
        v = c.val()
        if v.is_infinite:
            continue
        if not v.is_exact:
            lower = True
        pts.append((i, v.value, v.is_exact))
    if not pts:
        raise PrecisionError("every coefficient is zero at the working precision")
    if all(not e for _, _, e in pts):
        raise PrecisionError("no coefficient has a certified valuation")
    return NewtonPolygon(tuple(_hull(pts)), lower)


def wideg(f: TruncSeries):
    """Index of the first unit coefficient of an integral series (``math.inf`` if none)."""
    for i, c in enumerate(f.coeffs):
        v = c.val()
        if v.is_infinite:
            continue
        if v.is_exact:
            if v.value < 0:
                raise ValueError("wideg of a non-integral series")
            if v.value == 0:
                return i
        elif v.value <= 0:
            raise PrecisionError(f"cannot certify that coefficient {i} is a non-unit")
    if not f.is_poly and f.tail_val <= 0:
        return math.inf
    return math.inf


# --------------------------------------------------------------------------
# Weierstrass preparation
# --------------------------------------------------------------------------


def _split(h: TruncSeries, w: int):
    """``h = low + X^w * high`` with unknown coefficients turned into capped zeros."""
    F = h.field
    low = []
    for i in range(w):
        if i < len(h.coeffs):
            low.append(h.coeffs[i])
        elif h.is_poly:
            low.append(F.zero())
        else:
            low.append(F.zero().add_prec(h.tail_val))
    if h.is_poly:
        high = TruncSeries(F, h.coeffs[w:], None)
    else:
        n = max(h.order - w, 0)
        high = TruncSeries(F, h.coeffs[w:], n, h.tail_val)
    return low, high


def _pad(s: TruncSeries, M: int) -> TruncSeries:
    """Extend a truncated series to order ``M`` with capped zeros at its tail bound."""
    if s.is_poly or s.order >= M:
        return s
    cap = s.field.zero().add_prec(s.tail_val)
    return TruncSeries(s.field, list(s.coeffs) + [cap] * (M - s.order), M, s.tail_val)


def weierstrass_divide(g: TruncSeries, f: TruncSeries, N, M: int | None = None):
    """``g = Q*f + R`` with ``deg R < wideg(f)``, to p-precision ``N``.

    ``M`` bounds the X-order of the quotient.  Returns ``(Q, R)`` where ``R``
    is a coefficient list of length ``wideg(f)``.
    """
    F = f.field
    w = wideg(f)
    if w == math.inf:
        raise ValueError("wideg(f) is infinite")
    N = Fraction(N)
    if M is None:
        M = f.order if not f.is_poly else max(len(f), len(g)) + 8
    # only digits below N matter; capping keeps exact inputs from blowing up
    f = TruncSeries(F, [c.add_prec(N) for c in f.coeffs], f.order, f.tail_val)
    g = TruncSeries(F, [c.add_prec(N) for c in g.coeffs], g.order, g.tail_val)
    f_low, f_high = _split(f, w)
    delta = min((_lower(c) for c in f_low if _lower(c) is not None), default=None)
    if delta is not None and delta <= 0:
        raise PrecisionError("low part of f is not certifiably topologically nilpotent")
    f_low_s = TruncSeries(F, f_low, None)
    lo0 = g.val_lower() or 0
    iters = 1 if delta is None else max(1, math.ceil((N - lo0) / delta)) + 1
    M_work = M + w * iters
    inv_high = (f_high.truncate(M_work) if f_high.is_poly else _pad(f_high, M_work)).inverse(M_work)
    R = [F.zero()] * w
    Q = TruncSeries(F, [], M_work)
    h = g
    for k in range(iters + 10_000):
        lo = h.val_lower()
        if lo is None or lo >= N:
            break
        # step k feeds Q below X^M only through its first M + w*(iters-k) terms
        ord_k = max(M, M_work - w * k)
        low, high = _split(h, w)
        R = [r + c for r, c in zip(R, low)]
        high = high.truncate(ord_k) if high.is_poly else _pad(high, ord_k).truncate(ord_k)
        c = high * inv_high.truncate(ord_k)
        Q = Q + _pad(c, M_work)
        if delta is None:
            # f_low == 0: one step is exact
            break
        h = -(c * f_low_s)
    else:  # pragma: no cover - convergence is geometric
        raise PrecisionError("Weierstrass division did not converge")
    Q = Q.truncate(M)
    R = [r.add_prec(N) for r in R]
    Q = TruncSeries(F, [c.add_prec(N) for c in Q.coeffs], Q.order, min(Q.tail_val, N))
    return Q, R


def weierstrass_prep(f: TruncSeries, N=None, M: int | None = None):
    """Factor ``f = U*W`` with ``W`` distinguished of degree ``wideg(f)``.

    Returns ``(W, U)``; ``W`` is a polynomial, ``U`` a unit series of order
    ``M``.  ``N`` is the target p-precision (default: the coefficient precision
    of ``f``, or 30 for exact input).
    """
    F = f.field
    w = wideg(f)
    if w == math.inf:
        raise ValueError("wideg(f) is infinite")
    if N is None:
        precs = [c.prec for c in f.coeffs if c.prec is not None]
        N = min(precs) if precs else Fraction(30)
    if M is None:
        M = f.order if not f.is_poly else len(f) + 8
    if not f.is_poly and w >= f.order:
        raise ValueError("wideg must be below the truncation order")
    if f.is_poly and len(f) - 1 == w and f[w] == 1:
        lead_ok = all(_lower(c) is None or _lower(c) > 0 for c in f.coeffs[:w])
        if lead_ok:
            return f, TruncSeries.const(F, 1, M)
    Xw = TruncSeries(F, [0] * w + [1], None)
    Q, R = weierstrass_divide(Xw, f, N, M)
    W = TruncSeries(F, [-r for r in R] + [F.one()], None)
    U = Q.inverse(M)
    return W, U


# --------------------------------------------------------------------------
# Polynomial helpers
# --------------------------------------------------------------------------


def poly_divmod(a: Sequence[ExtElem], b: Sequence[ExtElem]):
    """Division by a polynomial whose leading coefficient is invertible."""
    a = list(a)
    b = list(b)
    while b and b[-1].is_zero() and b[-1].prec is None:
        b.pop()
    if not b:
        raise ZeroDivisionError
    lead_inv = b[-1].inverse() if not b[-1] == 1 else None
    db = len(b) - 1
    if len(a) <= db:
        return [], a
    quo = [None] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] if lead_inv is None else a[k] * lead_inv
        quo[k - db] = c
        if c.is_zero() and c.prec is None:
            continue
        for i in range(db):
            a[k - db + i] = a[k - db + i] - c * b[i]
    return quo, a[:db]


def power_sums(W: Sequence[ExtElem], K: int) -> list[ExtElem]:
    """Power sums ``s_0..s_{K-1}`` of the roots of a monic polynomial (Newton)."""
    W = list(W)
    n = len(W) - 1
    F = W[0].field
    # roots of W: e_k = (-1)^k * W[n-k]
    e = [F.one()] + [W[n - k] * (-1) ** k for k in range(1, n + 1)]
    s = [F.one().scale(n)]
    for k in range(1, K):
        acc = F.zero()
        for i in range(1, min(k - 1, n) + 1):
            term = e[i] * s[k - i]
            acc = acc + term if i % 2 == 1 else acc - term
        if k <= n:
            term = e[k].scale(k)
            acc = acc + term if k % 2 == 1 else acc - term
        s.append(acc)
    return s


def _reduce_mod(f: TruncSeries, W: TruncSeries) -> list[ExtElem]:
    F = W.field
    coeffs = [embed(c, F) for c in f.coeffs]
    _, r = poly_divmod(coeffs, W.coeffs)
    r = list(r) + [F.zero()] * (len(W) - 1 - len(r))
    return r


def mult_charpoly(f: TruncSeries, W: TruncSeries) -> list[ExtElem]:
    """Characteristic polynomial of multiplication by ``f`` on ``F[X]/(W)``."""
    F = W.field
    w = len(W) - 1
    cur = _reduce_mod(f, W)
    cols = [cur]
    for _ in range(1, w):
        shifted = [F.zero()] + cur
        _, cur = poly_divmod(shifted, W.coeffs)
        cur = list(cur) + [F.zero()] * (w - len(cur))
        cols.append(cur)
    A = [[cols[j][i] for j in range(w)] for i in range(w)]
    return charpoly_matrix(
        A, is_zero=lambda a: a.is_zero(), key=lambda a: a.center_val(), one=F.one()
    )


def _sylvester_det(a: list[ExtElem], b: list[ExtElem]) -> ExtElem:
    F = a[0].field
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [F.zero()] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [F.zero()] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    det = F.one()
    A = rows
    for col in range(size):
        cands = [r for r in range(col, size) if not A[r][col].is_zero()]
        if not cands:
            zero = F.zero()
            precs = [c.prec for row in A for c in row if c.prec is not None]
            return zero if not precs else zero.add_prec(min(precs))
        piv = min(cands, key=lambda r: A[r][col].center_val())
        if piv != col:
            A[piv], A[col] = A[col], A[piv]
            det = -det
        pv = A[col][col]
        det = det * pv
        inv = pv.inverse()
        for r in range(col + 1, size):
            if A[r][col].is_zero():
                continue
            m_ = A[r][col] * inv
            A[r] = [x - m_ * y for x, y in zip(A[r], A[col])]
    return det


def resultant(W: TruncSeries, f: TruncSeries) -> ExtElem:
    """``Res_X(W, f)`` by a Sylvester determinant (``W``, ``f`` polynomials)."""
    if not (W.is_poly and f.is_poly):
        raise ValueError("resultant needs polynomials")
    F = W.field
    a = list(W.coeffs)
    b = [embed(c, F) for c in f.coeffs]
    if len(b) == 1:
        return b[0] ** (len(a) - 1)
    if not b:
        return F.zero()
    return _sylvester_det(a, b)


def root_valuations(f: TruncSeries, W: TruncSeries, tail_val=None) -> list[ValResult]:
    """Valuations of ``f(z)`` over the roots ``z`` of a distinguished ``W``.

    Read off the Newton polygon of the characteristic polynomial of
    multiplication by ``f`` modulo ``W`` (i.e. ``Res_X(W, T - f)``).
    """
    w = len(W) - 1
    if w == 0:
        return []
    fk = TruncSeries(f.field, f.coeffs, None)
    cp = mult_charpoly(fk, W)
    out = _slopes_multiset(cp)
    if not f.is_poly:
        np_w = newton_polygon(W)
        mu_min = min(v for v, _ in np_w.root_valuations())
        tv = f.tail_val if tail_val is None else Fraction(tail_val)
        cap = tv + f.order * mu_min
        out = [v if (not v.is_infinite and v.is_exact and v.value < cap) else AtLeast(cap) for v in out]
    return sorted(out, key=_vkey)


def _vkey(v: ValResult):
    return (1, 0) if v.is_infinite else (0, v.value)


def _slopes_multiset(cp: list[ExtElem]) -> list[ValResult]:
    """Multiset of root valuations of a monic polynomial from its Newton polygon."""
    n = len(cp) - 1
    out = []
    k0 = 0
    while k0 < n and cp[k0].is_zero():
        k0 += 1
    for k in range(k0):
        out.append(INFINITE if cp[k].prec is None else AtLeast(cp[k].prec))
    if k0 == n:
        return out
    np_ = newton_polygon(cp[k0:])
    for (slope, length), exact in zip(np_.segments(), np_.segment_exact()):
        val = -slope
        out.extend([Exact(val) if exact else AtLeast(val)] * length)
    return out


# --------------------------------------------------------------------------
# Divisor profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class VProfile:
    """``mu -> sum_r min(0, mu - val(r))`` over a multiset of root valuations."""

    root_vals: tuple

    def __call__(self, mu) -> Fraction:
        mu = Fraction(mu)
        return sum((min(Fraction(0), mu - v) for v in self.root_vals), Fraction(0))

    def breakpoints(self) -> list[Fraction]:
        return sorted(set(self.root_vals))

    def pieces(self, mu_max=None) -> list[tuple[Fraction, Fraction, int, Fraction]]:
        """Affine pieces ``(mu_lo, mu_hi, slope, value_at_mu_lo)`` on ``[0, mu_max]``."""
        bps = [Fraction(0)] + [b for b in self.breakpoints() if b > 0]
        top = Fraction(mu_max) if mu_max is not None else (bps[-1] + 1)
        bps = [b for b in bps if b < top] + [top]
        out = []
        for lo, hi in zip(bps, bps[1:]):
            slope = sum(1 for v in self.root_vals if v > lo)
            out.append((lo, hi, slope, self(lo)))
        return out


def v_profile(root_vals: Iterable[ValResult], deg: int | None = None) -> VProfile:
    vals = []
    for v in root_vals:
        if isinstance(v, ValResult):
            if not v.is_exact:
                raise ValueError("v_profile needs exact root valuations")
            v = v.value
        vals.append(Fraction(v))
    if deg is not None and deg != len(vals):
        raise ValueError("degree does not match the number of roots")
    return VProfile(tuple(sorted(vals)))


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------


def _field_desc(F: LocalField) -> dict:
    return {"kind": F.kind, "g": list(F.g)}


def series_to_json(f: TruncSeries, N=None) -> str:
    F = f.field
    header = {
        "p": F.p,
        "field": _field_desc(F),
        "M": f.order,
        "N": None if N is None else str(N),
        "tail_val": str(f.tail_val),
    }
    coeffs = [
        {"mantissa": [str(c) for c in a.coords()], "precision": None if a.prec is None else str(a.prec)}
        for a in f.coeffs
    ]
    return json.dumps({"header": header, "coefficients": coeffs}, sort_keys=True)


def series_from_json(s: str) -> TruncSeries:
    data = json.loads(s)
    h = data["header"]
    fd = h["field"]
    F = Qp(h["p"]) if fd["kind"] == "Qp" else field_create(h["p"], fd["g"], fd["kind"])
    cs = [
        F.from_coords([Fraction(m) for m in rec["mantissa"]], None if rec["precision"] is None else Fraction(rec["precision"]))
        for rec in data["coefficients"]
    ]
    return TruncSeries(F, cs, h["M"], Fraction(h.get("tail_val", "0")))
