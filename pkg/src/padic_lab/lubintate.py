"""Lubin-Tate formal O_F-modules.

Endomorphisms ``[a]``, the group law, the logarithm and its inverse are all
solved degree by degree from the commutation rule with ``[pi]``: at degree
``r`` the unknown coefficient appears as ``(pi - pi^r) * c_r`` and everything
else involves lower degrees only.

Torsion points come in two flavours.  A :class:`TorsionLabel` ``(n, a)``
names ``[a](z_n)`` for a fixed generator ``z_n`` of ``LT[pi^n]`` and supports
exact valuation bookkeeping.  :func:`torsion_embed` produces the actual value
inside ``Q_p[z]/(W_n(z))`` (base field ``Q_p`` only).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ltlike import LTLike, ltlike_check, root_power_sums, shell_W, standard_P
from .padics import (
    INFINITE,
    AtLeast,
    Exact,
    ExtElem,
    LocalField,
    PrecisionError,
    Qp,
    ValResult,
    field_create,
    vmin,
)
from .powseries import TruncSeries

__all__ = [
    "FormalModule",
    "BivSeries",
    "TorsionLabel",
    "PnPolys",
    "lt_mult",
    "lt_group_law",
    "lt_sub",
    "lt_log",
    "lt_exp",
    "pn_polys",
    "omega_val",
    "torsion_pairwise_val",
    "torsion_embed",
    "torsion_field",
    "ckn",
    "ckn_sup_scan",
    "module_to_json",
    "module_from_json",
]


# --------------------------------------------------------------------------
# bivariate series
# --------------------------------------------------------------------------


class BivSeries:
    """``sum c_ij X^i Y^j`` known for total degree ``< order``."""

    __slots__ = ("field", "terms", "order")

    def __init__(self, field: LocalField, terms: dict, order: int):
        self.field = field
        self.order = order
        self.terms = {k: v for k, v in terms.items() if sum(k) < order and not (v.is_zero() and v.prec is None)}

    def __getitem__(self, ij) -> ExtElem:
        return self.terms.get(ij, self.field.zero())

    def __add__(self, other: "BivSeries") -> "BivSeries":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return BivSeries(self.field, out, min(self.order, other.order))

    def __mul__(self, other: "BivSeries") -> "BivSeries":
        order = min(self.order, other.order)
        out: dict = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                if i + j + k + l >= order:
                    continue
                key = (i + k, j + l)
                out[key] = out[key] + a * b if key in out else a * b
        return BivSeries(self.field, out, order)

    def scale(self, c: ExtElem) -> "BivSeries":
        return BivSeries(self.field, {k: c * v for k, v in self.terms.items()}, self.order)

    def homogeneous(self, d: int) -> dict:
        return {k: v for k, v in self.terms.items() if sum(k) == d}

    def subs(self, x: TruncSeries, y: TruncSeries) -> TruncSeries:
        """``F(x(T), y(T))`` for series without constant term."""
        M = min(self.order, x.order or self.order, y.order or self.order)
        xs = [TruncSeries.const(self.field, 1, M)]
        ys = [TruncSeries.const(self.field, 1, M)]
        need_i = max((i for i, _ in self.terms), default=0)
        need_j = max((j for _, j in self.terms), default=0)
        for _ in range(need_i):
            xs.append(xs[-1] * x)
        for _ in range(need_j):
            ys.append(ys[-1] * y)
        acc = TruncSeries(self.field, [], M)
        for (i, j), c in self.terms.items():
            acc = acc + (xs[i] * ys[j]).scale(c)
        return acc

    def evaluate(self, x: ExtElem, y: ExtElem) -> ExtElem:
        """Value at a point of the open bidisk; the unknown tail caps the precision."""
        K = x.field
        acc = K.zero()
        for (i, j), c in self.terms.items():
            acc = acc + _emb(c, K) * x**i * y**j
        vx, vy = x.center_val(), y.center_val()
        vs = [v for v in (vx, vy) if v is not None]
        if vs:
            m = min(vs)
            if m <= 0:
                raise PrecisionError("group law evaluated outside the open disk")
            acc = acc.add_prec(self.order * m)
        return acc


def _emb(c: ExtElem, K: LocalField) -> ExtElem:
    if c.field == K:
        return c
    if c.field.d == 1:
        return K.from_coords([c.coords()[0]], c.prec)
    raise ValueError(f"no embedding of {c.field} into {K}")


# --------------------------------------------------------------------------
# the module
# --------------------------------------------------------------------------


class FormalModule:
    """Lubin-Tate module over ``F`` attached to ``[pi]``.

    ``M`` is the X-order of every series; ``N`` (optional) the target
    p-precision.  With ``N`` set, series are computed with capped arithmetic and
    guard digits; with ``N=None`` everything is exact.
    """

    def __init__(self, F: LocalField, pi_series: TruncSeries | None = None, M: int = 20, N=None):
        self.F = F
        self.M = M
        self.N = None if N is None else Fraction(N)
        self.L: LTLike = standard_P(F) if pi_series is None else ltlike_check(pi_series.change_ring(F))
        P = self.L.P
        if not (P[1] - F.pi).is_zero():
            raise ValueError("[pi] must be pi*X mod degree 2")
        if self.L.q != F.q or self.L.v_1 != F.val_pi:
            raise ValueError("[pi] must be X^q mod pi")
        self.P = P
        self._mult: dict = {}
        self._law = None
        self._log = None
        self._exp = None
        p = F.p
        self.multiplicative = F.kind == "Qp" and all(
            (P[i] - math.comb(p, i)).is_zero() for i in range(1, p + 1)
        ) and P.degree == p

    def __repr__(self):
        return f"FormalModule({self.F!r}, [pi]={self.P!r}, M={self.M}, N={self.N})"

    @property
    def q(self) -> int:
        return self.L.q

    def _guard(self, extra: int = 0) -> Fraction | None:
        if self.N is None:
            return None
        return self.N + (self.M + 2 + extra) * self.F.val_pi

    def _seed(self, c: ExtElem, extra: int = 0) -> ExtElem:
        g = self._guard(extra)
        return c if g is None else c.add_prec(g)

    def _check_prec(self, s: TruncSeries, what: str):
        if self.N is None:
            return
        for c in s.coeffs:
            if c.prec is not None and c.prec < self.N:
                raise PrecisionError(f"{what}: precision {c.prec} below target {self.N}")

    # [pi] powers, cached per order
    @lru_cache(maxsize=None)
    def _P_powers(self, kmax: int):
        P = self.P.truncate(self.M)
        pw = [TruncSeries.const(self.F, 1, self.M)]
        for _ in range(kmax):
            pw.append(pw[-1] * P)
        return pw


def _elem(M: FormalModule, a) -> ExtElem:
    a = a if isinstance(a, ExtElem) else M.F(a)
    if not a.is_integral():
        raise ValueError("a must lie in O_F")
    return a


def lt_mult(M: FormalModule, a) -> TruncSeries:
    """``[a](X)``, the endomorphism with linear term ``a*X`` commuting with ``[pi]``."""
    a = _elem(M, a)
    key = (tuple(a.coords()), a.prec)
    if key in M._mult:
        return M._mult[key]
    F = M.F
    if M.multiplicative and a.prec is None:
        # (1+X)^a - 1 = sum_{i>=1} binom(a, i) X^i, binom(a, i) in Z_p
        x = a.coords()[0]
        cs = [Fraction(0)]
        b = Fraction(1)
        for i in range(1, M.M):
            b = b * (x - i + 1) / i
            cs.append(b)
        out = TruncSeries(F, cs, M.M, 0)
        M._mult[key] = out
        return out
    pi = F.pi
    Mx = M.M
    P = M.P
    Ppow = M._P_powers(Mx - 1)
    c = [F.zero(), M._seed(a)]
    for r in range(2, Mx):
        # [A_<r o P]_r
        lhs = F.zero()
        for j in range(1, r):
            if not c[j].is_zero():
                lhs = lhs + c[j] * Ppow[j][r]
        # [P o A_<r]_r = sum_{i>=2} p_i [A^i]_r
        A = TruncSeries(F, c, r + 1)
        rhs = F.zero()
        Ai = A
        for i in range(2, min(P.degree, r) + 1):
            Ai = Ai * A
            if not P[i].is_zero():
                rhs = rhs + P[i] * Ai[r]
        c.append((lhs - rhs) * (pi - pi**r).inverse())
    out = TruncSeries(F, c, Mx, 0)
    M._check_prec(out, f"[{a}]")
    M._mult[key] = out
    return out


def lt_group_law(M: FormalModule) -> BivSeries:
    """``F(X, Y)`` with ``F(P(X), P(Y)) = P(F(X, Y))``, to total degree ``< M``."""
    if M._law is not None:
        return M._law
    F = M.F
    Mx = M.M
    one = M._seed(F.one())
    if M.multiplicative:
        M._law = BivSeries(F, {(1, 0): F.one(), (0, 1): F.one(), (1, 1): F.one()}, Mx)
        return M._law
    pi = F.pi
    P = M.P
    Ppow = M._P_powers(Mx - 1)
    law = BivSeries(F, {(1, 0): one, (0, 1): one}, Mx)
    for d in range(2, Mx):
        # degree-d part of F_<d(P(X), P(Y))
        lhs: dict = {}
        for (i, j), cij in law.terms.items():
            for a in range(i, d - j + 1):
                b = d - a
                pa, pb = Ppow[i][a], Ppow[j][b]
                if pa.is_zero() or pb.is_zero():
                    continue
                t = cij * pa * pb
                lhs[(a, b)] = lhs[(a, b)] + t if (a, b) in lhs else t
        # degree-d part of sum_{i>=2} p_i F_<d^i
        rhs: dict = {}
        G = BivSeries(F, law.terms, d + 1)
        Gi = G
        for i in range(2, min(P.degree, d) + 1):
            Gi = Gi * G
            if P[i].is_zero():
                continue
            for k, v in Gi.homogeneous(d).items():
                t = P[i] * v
                rhs[k] = rhs[k] + t if k in rhs else t
        inv = (pi - pi**d).inverse()
        new = dict(law.terms)
        for k in set(lhs) | set(rhs):
            val = (lhs.get(k, F.zero()) - rhs.get(k, F.zero())) * inv
            new[k] = val
        law = BivSeries(F, new, Mx)
    M._law = law
    return law


def lt_sub(M: FormalModule, x: ExtElem, y: ExtElem) -> ExtElem:
    """``x (-) y = F(x, [-1](y))`` for points of the open disk."""
    neg = lt_mult(M, -1)
    ny = neg(y)
    return lt_group_law(M).evaluate(x, ny)


def lt_log(M: FormalModule) -> TruncSeries:
    """``log`` with ``log(P(X)) = pi*log(X)`` and ``log'(0) = 1`` (exact)."""
    if M._log is not None:
        return M._log
    F = M.F
    pi = F.pi
    Mx = M.M
    P = M.P.truncate(Mx)
    Ppow = [TruncSeries.const(F, 1, Mx)]
    for _ in range(Mx - 1):
        Ppow.append(Ppow[-1] * P)
    ell = [F.zero(), F.one()]
    for r in range(2, Mx):
        s = F.zero()
        for j in range(1, r):
            if not ell[j].is_zero():
                s = s + ell[j] * Ppow[j][r]
        ell.append(s * (pi - pi**r).inverse())
    M._log = TruncSeries(F, ell, Mx, 0)
    return M._log


def lt_exp(M: FormalModule) -> TruncSeries:
    """Compositional inverse of :func:`lt_log`."""
    if M._exp is not None:
        return M._exp
    F = M.F
    lg = lt_log(M)
    Mx = M.M
    lpow = [TruncSeries.const(F, 1, Mx), lg]
    e = [F.zero(), F.one()]
    for r in range(2, Mx):
        lpow.append(lpow[-1] * lg)
        s = F.zero()
        for j in range(1, r):
            if not e[j].is_zero():
                s = s + e[j] * lpow[j][r]
        e.append(-s)
    M._exp = TruncSeries(F, e, Mx, 0)
    return M._exp


@dataclass(frozen=True)
class PnPolys:
    """``P_0..P_n`` in ``Y``; ``polys[n][k]`` is the coefficient of ``Y^k``."""

    field: LocalField
    polys: tuple

    def __getitem__(self, n):
        return self.polys[n]

    def evaluate(self, n: int, y) -> ExtElem:
        y = y if isinstance(y, ExtElem) else self.field(y)
        acc = self.field.zero()
        for c in reversed(self.polys[n]):
            acc = acc * y + c
        return acc


def pn_polys(M: FormalModule, n_max: int) -> PnPolys:
    """``exp(Y*log_LT(X)) = sum_n P_n(Y) X^n`` (classical exponential)."""
    if n_max >= M.M:
        raise ValueError("n_max must be below the X-order")
    F = M.F
    lg = lt_log(M).truncate(n_max + 1)
    polys = [[F.zero()] * (n + 1) for n in range(n_max + 1)]
    polys[0][0] = F.one()
    lk = TruncSeries.const(F, 1, n_max + 1)
    fact = 1
    for k in range(1, n_max + 1):
        lk = lk * lg
        fact *= k
        for n in range(k, n_max + 1):
            polys[n][k] = lk[n].scale(Fraction(1, fact))
    return PnPolys(F, tuple(tuple(p) for p in polys))


def omega_val(F: LocalField) -> Fraction:
    """``1/(p-1) - 1/(e(q-1))``."""
    return Fraction(1, F.p - 1) - Fraction(1, F.e * (F.q - 1))


# --------------------------------------------------------------------------
# torsion
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionLabel:
    """The point ``[a](z_n)``; ``a`` only matters modulo ``pi^n``."""

    n: int
    a: ExtElem

    def pi_val(self) -> int | None:
        """pi-adic valuation of ``a`` capped at ``n`` (``None`` when ``a == 0``)."""
        v = self.a.center_val()
        if v is None:
            return None
        return min(int(v * self.a.field.e), self.n)

    @property
    def order(self) -> int:
        v = self.pi_val()
        return 0 if v is None else self.n - v

    def lift(self, N: int) -> "TorsionLabel":
        """Same point written at level ``N >= n``."""
        if N < self.n:
            raise ValueError("can only lift to a higher level")
        return TorsionLabel(N, self.a * self.a.field.pi ** (N - self.n))


def torsion_pairwise_val(M: FormalModule, l1: TorsionLabel, l2: TorsionLabel) -> ValResult:
    """``val(z1 - z2) = mu_k`` with ``k`` the exact order of the difference."""
    N = max(l1.n, l2.n)
    a1, a2 = l1.lift(N), l2.lift(N)
    d = TorsionLabel(N, a1.a - a2.a)
    k = d.order
    if k == 0:
        return INFINITE
    return Exact(M.L.mu(k))


@lru_cache(maxsize=None)
def _torsion_field_cached(M: FormalModule, n: int) -> LocalField:
    W = shell_W(M.L, n)
    g = []
    for c in W.coeffs:
        x = c.rational()
        if x.denominator != 1 or c.prec is not None:
            raise PrecisionError("W_n must have exact integer coefficients")
        g.append(int(x))
    return field_create(M.F.p, g, "Eisenstein")


def torsion_field(M: FormalModule, n: int) -> LocalField:
    """``Q_p[z]/(W_n(z))``, a totally ramified field of degree ``q_n``."""
    if M.F.kind != "Qp":
        raise NotImplementedError("torsion embeddings are implemented for F = Q_p only")
    if n < 1:
        raise ValueError("n >= 1")
    return _torsion_field_cached(M, n)


def torsion_embed(M: FormalModule, label: TorsionLabel, N=None, M_X: int | None = None) -> ExtElem:
    """``[a](z)`` in ``K_n = Q_p[z]/(W_n(z))`` where ``z`` is the class of ``X``."""
    n = label.n
    if n == 0 or label.order == 0:
        K = torsion_field(M, max(n, 1))
        return K.zero()
    K = torsion_field(M, n)
    z = K.gen
    p = M.F.p
    a = label.a.rational()
    if a.denominator != 1:
        a = Fraction(a.numerator * pow(a.denominator, -1, p**n) % p**n)
    a = int(a) % p**n
    if M.multiplicative:
        return (K.one() + z) ** a - K.one()
    series = lt_mult(M, a)
    if M_X is not None:
        series = series.truncate(M_X)
    mu = M.L.mu(n)
    cap = series.tail_val + series.order * mu
    if N is not None and cap < Fraction(N):
        raise PrecisionError(f"tail bound {cap} below target precision {N}")
    return series(z)


def ckn(M: FormalModule, k: int, n: int) -> ExtElem:
    """``c_{k,n} = q^(-n) * sum_{[pi^n](w)=0} w^k``."""
    s = root_power_sums(M.L, n, k + 1)[k]
    return s.scale(Fraction(1, M.q**n))


def ckn_sup_scan(M: FormalModule, n: int, K: int | None = None) -> dict:
    """``min_k val c_{k,n}`` over ``k <= K`` with the tail certificate."""
    L = M.L
    K = 2 * L.q ** (n + 1) if K is None else K
    s = root_power_sums(L, n, K + 1)
    shift = n * M.F(L.q).val().value
    vals = [x.val() for x in s]
    finite = [v for v in vals if not v.is_infinite]
    best = vmin(finite)
    best_c = best - shift
    argmin = next(k for k, v in enumerate(vals) if v == best)
    tail = (K + 1) * L.mu(n + 1) + (n - 1) * L.v_1 - shift
    certified = best_c.is_exact and tail > best_c.value
    return {"n": n, "K": K, "min_val": best_c, "argmin": argmin, "tail_bound": tail, "certified": certified}


# --------------------------------------------------------------------------
# fixtures
# --------------------------------------------------------------------------


def module_to_json(M: FormalModule) -> str:
    F = M.F
    return json.dumps(
        {
            "p": F.p,
            "g": list(F.g),
            "kind": F.kind,
            "pi_series": [[str(x) for x in c.coords()] for c in M.P.coeffs],
            "M": M.M,
            "N": None if M.N is None else str(M.N),
        }
    )


def module_from_json(s: str) -> FormalModule:
    d = json.loads(s)
    kind = d.get("kind") or ("Qp" if d["g"] == [0, 1] else "Eisenstein")
    F = Qp(d["p"]) if kind == "Qp" else field_create(d["p"], d["g"], kind)
    P = TruncSeries(F, [F.from_coords([Fraction(x) for x in c]) for c in d["pi_series"]])
    return FormalModule(F, P, M=d["M"], N=None if d["N"] is None else Fraction(d["N"]))
