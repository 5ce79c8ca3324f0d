"""LT-like series, their root shells, and the operators phi and psi.

``P`` is LT-like when ``0 < val(p_1) <= 1``, ``p_q`` is a unit and every other
coefficient is divisible by ``p_1``.  The iterated roots of ``P`` are split
into shells: level ``n`` holds the ``q_n = q^(n-1)(q-1)`` roots of
``Q_n = Q(P^(n-1))`` (``Q = P/X``), all of valuation ``mu_n = v_1/q_n``.

``psi`` is the unnormalized trace: ``psi(f)(P(X)) = sum f(X')`` over the ``q``
roots ``X'`` of ``P(X') = P(X)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .padics import (
    INFINITE,
    AtLeast,
    Exact,
    ExtElem,
    LocalField,
    PrecisionError,
    Qp,
    ValResult,
    val_ge,
    vmin,
)
from .powseries import (
    TruncSeries,
    gauss_V,
    poly_divmod,
    power_sums,
    root_valuations,
    weierstrass_divide,
    weierstrass_prep,
    wideg,
)

__all__ = [
    "LTLike",
    "ShellParams",
    "InequalityCheck",
    "LTLikeError",
    "ltlike_check",
    "standard_P",
    "cyclotomic_P",
    "shell_series",
    "shell_W",
    "shell_eisenstein",
    "shell_level_val",
    "root_power_sums",
    "psi",
    "psi_iter",
    "psi_iter_zero",
    "lambda_sum_oracle",
    "shell_sup",
    "boundary_gap",
    "psidiv_check",
    "psibound_check",
    "supsi_scan",
    "log_P",
    "p_order_profile",
    "wellsep_check",
]


class LTLikeError(ValueError):
    """Raised by :func:`ltlike_check`; ``violations`` lists every failed condition."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class ShellParams:
    n: int
    q_n: int
    mu_n: Fraction


@dataclass(frozen=True)
class InequalityCheck:
    """``lhs >= rhs`` with a three-valued outcome."""

    lhs: ValResult
    rhs: ValResult
    status: str  # "pass", "fail" or "inconclusive"

    def __bool__(self):
        return self.status == "pass"

    def to_json(self):
        return {"lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(), "pass": self.status == "pass", "status": self.status}


def _check(lhs: ValResult, rhs: ValResult) -> InequalityCheck:
    r = val_ge(lhs, rhs)
    return InequalityCheck(lhs, rhs, {True: "pass", False: "fail", None: "inconclusive"}[r])


class LTLike:
    """A validated LT-like series.  Build it with :func:`ltlike_check`."""

    def __init__(self, P: TruncSeries, q: int, v_1: Fraction, p_1: ExtElem):
        self.P = P
        self.F: LocalField = P.field
        self.q = q
        self.v_1 = v_1
        self.p_1 = p_1
        self._W: dict[int, TruncSeries] = {}
        self._Q: dict[int, TruncSeries] = {}
        self._iter: dict[int, TruncSeries] = {0: TruncSeries.X(self.F)}

    def __repr__(self):
        return f"LTLike(P={self.P!r}, q={self.q}, v_1={self.v_1})"

    @property
    def deg(self) -> int:
        return self.P.degree

    @property
    def simple(self) -> bool:
        """``deg P == q``: the base-P expansion is plain polynomial division."""
        return self.deg == self.q

    def shell(self, n: int) -> ShellParams:
        if n < 1:
            raise ValueError("shells start at n = 1")
        q_n = self.q ** (n - 1) * (self.q - 1)
        return ShellParams(n, q_n, self.v_1 / q_n)

    def mu(self, n: int) -> Fraction:
        return self.shell(n).mu_n

    def iterate(self, k: int) -> TruncSeries:
        """``P`` composed with itself ``k`` times (a polynomial)."""
        if k not in self._iter:
            self._iter[k] = self.P.compose(self.iterate(k - 1))
        return self._iter[k]

    @cached_property
    def Q(self) -> TruncSeries:
        return TruncSeries(self.F, self.P.coeffs[1:], None)

    @cached_property
    def trace_consts(self) -> list:
        """``psi(X^j)`` for ``j < q``; constants when ``deg P == q``."""
        if self.simple:
            lead_inv = self.P[self.q].inverse()
            monic = [c * lead_inv for c in self.P.coeffs]
            return [TruncSeries.const(self.F, s) for s in power_sums(monic, self.q)]
        return None


def ltlike_check(P: TruncSeries) -> LTLike:
    """Validate ``P`` and return the :class:`LTLike` record."""
    if not P.is_poly:
        # the stored terms are taken as the polynomial P
        P = TruncSeries(P.field, P.coeffs, None)
    bad = []
    if len(P.coeffs) == 0 or not (P[0].is_zero() and P[0].prec is None):
        bad.append("P(0) != 0")
    v1r = P[1].val() if len(P) > 1 else INFINITE
    if not v1r.is_exact:
        bad.append("p_1 = 0 or its valuation is not certified")
        raise LTLikeError(bad)
    v_1 = v1r.value
    if not (0 < v_1 <= 1):
        bad.append(f"val(p_1) = {v_1} is not in (0, 1]")
    try:
        q = wideg(P)
    except (ValueError, PrecisionError) as exc:
        bad.append(f"wideg undefined: {exc}")
        raise LTLikeError(bad) from None
    if q == math.inf:
        bad.append("no unit coefficient p_q")
        raise LTLikeError(bad)
    p = P.field.p
    if q < 2 or q != p ** round(math.log(q, p)):
        bad.append(f"first unit coefficient at degree {q}, not a power of p")
    for i, c in enumerate(P.coeffs):
        if i == q:
            continue
        v = c.val()
        ok = val_ge(v, Exact(v_1))
        if ok is not True:
            bad.append(f"val(p_{i}) >= v_1 fails (val = {v})")
    if bad:
        raise LTLikeError(bad)
    return LTLike(P, q, v_1, P[1])


def standard_P(F: LocalField) -> LTLike:
    """``[pi](X) = pi*X + X^q`` over ``F``."""
    coeffs = [F.zero(), F.pi] + [F.zero()] * (F.q - 2) + [F.one()]
    return ltlike_check(TruncSeries(F, coeffs))


def cyclotomic_P(p: int, F: LocalField | None = None) -> LTLike:
    """``(1+X)^p - 1``."""
    F = F or Qp(p)
    return ltlike_check(TruncSeries(F, [0] + [math.comb(p, i) for i in range(1, p + 1)]))


# --------------------------------------------------------------------------
# shells
# --------------------------------------------------------------------------


def shell_series(L: LTLike, n: int) -> TruncSeries:
    """``Q_n = Q(P^(n-1)(X))`` as a polynomial."""
    if n < 1:
        raise ValueError("n >= 1")
    if n not in L._Q:
        L._Q[n] = L.Q.compose(L.iterate(n - 1))
    return L._Q[n]


def _is_eisenstein(W: TruncSeries, F: LocalField) -> bool:
    vpi = F.val_pi
    cs = W.coeffs
    if not (cs[-1] == 1):
        return False
    for i, c in enumerate(cs[:-1]):
        v = c.val()
        if not v.is_exact and not v.is_infinite:
            return False
        if i == 0:
            if not (v.is_exact and v.value == vpi):
                return False
        elif not v.is_infinite and v.value < vpi:
            return False
    return True


def shell_W(L: LTLike, n: int, N=None) -> TruncSeries:
    """Distinguished factor ``W_n`` of ``Q_n`` (``W_0 = X``)."""
    if n == 0:
        return TruncSeries.X(L.F)
    if n in L._W:
        return L._W[n]
    Qn = shell_series(L, n)
    q_n = L.shell(n).q_n
    if Qn.degree == q_n:
        lead_inv = Qn[q_n].inverse()
        W = TruncSeries(L.F, [c * lead_inv for c in Qn.coeffs])
    else:
        W, _ = weierstrass_prep(Qn, N=N if N is not None else 40)
    if len(W) - 1 != q_n:
        raise PrecisionError(f"wideg(Q_{n}) = {len(W) - 1}, expected {q_n}")
    L._W[n] = W
    return W


def shell_eisenstein(L: LTLike, n: int) -> bool:
    return n >= 1 and _is_eisenstein(shell_W(L, n), L.F)


# --------------------------------------------------------------------------
# psi
# --------------------------------------------------------------------------


def _as_field(L: LTLike, f: TruncSeries) -> TruncSeries:
    return f if f.field == L.F else f.change_ring(L.F)


def _expand_simple(L: LTLike, coeffs: Sequence[ExtElem]) -> list[list[ExtElem]]:
    """Digits ``r[k][j]`` with ``f = sum_k P^k * sum_j r[k][j] X^j`` (deg P == q)."""
    q = L.q
    digits = []
    cur = list(coeffs)
    while cur:
        quo, rem = poly_divmod(cur, L.P.coeffs)
        rem = list(rem) + [L.F.zero()] * (q - len(rem))
        digits.append(rem)
        cur = list(quo)
        while cur and cur[-1].is_zero() and cur[-1].prec is None:
            cur.pop()
    return digits


def _expand_general(L: LTLike, f: TruncSeries, K: int, N) -> list[list[ExtElem]]:
    """Same digits via repeated Weierstrass division by ``P`` (any degree)."""
    q = L.q
    digits = []
    cur = f
    for _ in range(K):
        M = max((cur.order if not cur.is_poly else len(cur) + q) - q, 1)
        quo, rem = weierstrass_divide(cur, L.P, N, M)
        digits.append(list(rem) + [L.F.zero()] * (q - len(rem)))
        cur = quo
    return digits


def _trace_consts_general(L: LTLike, K: int, N) -> list[TruncSeries]:
    """``psi(X^j) = sum_i [digit i of X^(i+j)]``, as series in ``T`` of order ``K``."""
    q = L.q
    out = []
    for j in range(q):
        acc = [L.F.zero()] * K
        for i in range(q):
            mono = TruncSeries(L.F, [0] * (i + j) + [1], q * K + 2 * q)
            dig = _expand_general(L, mono, K, N)
            for k in range(K):
                acc[k] = acc[k] + dig[k][i]
        out.append(TruncSeries(L.F, acc, K))
    return out


def psi(L: LTLike, f: TruncSeries, M_out: int | None = None, N=None) -> TruncSeries:
    """``psi(f)``: the series ``g`` with ``g(P(X)) = Tr(f)``.

    Polynomial input with ``deg P == q`` gives an exact polynomial.  A series
    known mod ``X^M`` gives a series known mod ``X^(M // q)``; the unknown
    input tail lowers the precision of output coefficient ``i`` to
    ``(M//q - i + 1)*v_1 + tail_val``.
    """
    f = _as_field(L, f)
    q, F = L.q, L.F
    if f.is_poly and L.simple:
        digits = _expand_simple(L, f.coeffs)
        return _assemble(L, digits, None, L.trace_consts)
    if f.is_poly:
        # a polynomial is a series whose tail vanishes to any precision
        N = Fraction(30) if N is None else Fraction(N)
        M_out = M_out or len(f) // q + 2
        f = TruncSeries(F, f.coeffs, q * M_out, N)
    k = f.order // q
    if M_out is not None:
        if M_out > k:
            raise PrecisionError(f"psi to order {M_out} needs input order {q * M_out}, have {f.order}")
        k = M_out
    if k == 0:
        raise PrecisionError(f"input order {f.order} < q = {q}")
    if L.simple:
        known = TruncSeries(F, f.coeffs, None)
        digits = _expand_simple(L, known.coeffs)
        g = _assemble(L, digits, None, L.trace_consts)
    else:
        if N is None:
            precs = [c.prec for c in f.coeffs if c.prec is not None]
            N = min(precs) if precs else Fraction(30)
        digits = _expand_general(L, f, k, N)
        g = _assemble(L, digits, k, _trace_consts_general(L, k, N))
    lo = f.val_lower() or 0
    cs = []
    for i in range(k):
        c = g[i] if i < len(g.coeffs) or g.is_poly else F.zero().add_prec(g.tail_val)
        cs.append(c.add_prec((k - i + 1) * L.v_1 + f.tail_val))
    return TruncSeries(F, cs, k, L.v_1 + min(f.tail_val, lo))


def _assemble(L: LTLike, digits, order, consts) -> TruncSeries:
    """``sum_j g_j * psi(X^j)`` where ``g_j(T) = sum_k digits[k][j] T^k``."""
    out = TruncSeries(L.F, [], order)
    for j in range(L.q):
        gj = TruncSeries(L.F, [d[j] for d in digits], order)
        out = out + gj * consts[j]
    return out


def psi_iter(L: LTLike, f: TruncSeries, n: int) -> TruncSeries:
    """``psi^n(f)``; a truncated input must have order at least ``q^n``."""
    if not f.is_poly and f.order < L.q**n:
        raise PrecisionError(f"psi^{n} needs input order >= {L.q ** n}, have {f.order}")
    g = f
    for _ in range(n):
        g = psi(L, g)
    return g


def psi_iter_zero(L: LTLike, f: TruncSeries, n: int) -> ExtElem:
    """``psi^n(f)(0)``, equal to the sum of ``f`` over ``Lambda_n``."""
    if n < 1:
        raise ValueError("n >= 1")
    g = psi_iter(L, f, n)
    return g[0] if len(g.coeffs) or not g.is_poly else L.F.zero()


def lambda_sum_oracle(L: LTLike, f: TruncSeries, n: int) -> ExtElem:
    """``f(0) + sum_{k=1..n} Tr(f mod W_k)``, via power sums of the ``W_k``."""
    f = _as_field(L, f)
    F = L.F
    total = f[0] if len(f.coeffs) else (F.zero() if f.is_poly else F.zero().add_prec(f.tail_val))
    for k in range(1, n + 1):
        W = shell_W(L, k)
        s = power_sums(W.coeffs, len(f.coeffs))
        acc = F.zero()
        for c, sk in zip(f.coeffs, s):
            if not (c.is_zero() and c.prec is None):
                acc = acc + c * sk
        if not f.is_poly:
            acc = acc.add_prec(f.tail_val + f.order * L.mu(k))
        total = total + acc
    return total


# --------------------------------------------------------------------------
# boundary experiments
# --------------------------------------------------------------------------


def _reduce(L: LTLike, f: TruncSeries, W: TruncSeries) -> list[ExtElem]:
    _, r = poly_divmod(list(f.coeffs), W.coeffs)
    return list(r)


def shell_level_val(L: LTLike, f: TruncSeries, k: int) -> ValResult:
    """``min val f(z)`` over the roots of ``W_k``."""
    f = _as_field(L, f)
    if k == 0:
        return f[0].val() if len(f.coeffs) else (INFINITE if f.is_poly else AtLeast(f.tail_val))
    W = shell_W(L, k)
    mu = L.mu(k)
    if _is_eisenstein(W, L.F):
        r = _reduce(L, TruncSeries(L.F, f.coeffs), W)
        vals = [c.val() + i * mu for i, c in enumerate(r) if not c.val().is_infinite]
        v = vmin(vals) if vals else INFINITE
        if not f.is_poly:
            v = vmin([v, AtLeast(f.tail_val + f.order * mu)])
        return v
    vals = root_valuations(f, W)
    finite = [v for v in vals if not v.is_infinite]
    return vmin(finite) if finite else INFINITE


def shell_sup(L: LTLike, f: TruncSeries, n: int) -> ValResult:
    """``min`` over ``Lambda_n`` of ``val f(z)``; zeros of ``f`` are skipped."""
    vals = [shell_level_val(L, f, k) for k in range(n + 1)]
    finite = [v for v in vals if not v.is_infinite]
    return vmin(finite) if finite else INFINITE


def boundary_gap(L: LTLike, f: TruncSeries, n_max: int) -> list[dict]:
    """Rows ``{n, q_n, mu_n, gap, status}`` with ``gap = shell_sup - V(f, 0)``."""
    f = _as_field(L, f)
    V0 = gauss_V(f, 0)
    rows = []
    level = [shell_level_val(L, f, 0)]
    for n in range(1, n_max + 1):
        level.append(shell_level_val(L, f, n))
        finite = [v for v in level if not v.is_infinite]
        sup = vmin(finite) if finite else INFINITE
        sp = L.shell(n)
        if sup.is_infinite:
            gap, status = None, "vanishes"
        elif not V0.is_exact:
            gap, status = None, "inconclusive"
        else:
            gap = sup.value - V0.value
            status = "ok" if sup.is_exact else "atleast"
        rows.append({"n": n, "q_n": sp.q_n, "mu_n": sp.mu_n, "gap": gap, "status": status})
    return rows


def psidiv_check(L: LTLike, f: TruncSeries) -> bool:
    """Every coefficient of ``psi(f)`` has valuation at least ``v_1``."""
    g = psi(L, f)
    target = Exact(L.v_1)
    for c in g.coeffs:
        if val_ge(c.val(), target) is not True:
            return False
    return g.is_poly or g.tail_val >= L.v_1


def psibound_check(L: LTLike, f: TruncSeries, n: int) -> InequalityCheck:
    """``val(psi^n(f)(0)) >= V(f, mu_{n+1}) + (n-1) v_1``."""
    lhs = psi_iter_zero(L, f, n).val()
    rhs = gauss_V(_as_field(L, f), L.mu(n + 1)) + (n - 1) * L.v_1
    return _check(lhs, rhs)


def root_power_sums(L: LTLike, n: int, K: int) -> list[ExtElem]:
    """``sum_{z in Lambda_n} z^k`` for ``k < K`` (``deg P == q`` only)."""
    if not L.simple:
        raise ValueError("power sums over Lambda_n need deg P == q")
    Pn = L.iterate(n)
    lead_inv = Pn.coeffs[-1].inverse()
    return power_sums([c * lead_inv for c in Pn.coeffs], K)


def supsi_scan(L: LTLike, n: int, K: int | None = None) -> dict:
    """``min_k val psi^n(X^k)(0)`` over ``k <= K`` plus a tail certificate.

    For ``k > K`` the bound ``val >= k*mu_{n+1} + (n-1)*v_1`` applies; the
    certificate holds when that exceeds the observed minimum.
    """
    K = 2 * L.q ** (n + 1) if K is None else K
    s = root_power_sums(L, n, K + 1)
    vals = [x.val() for x in s]
    finite = [v for v in vals if not v.is_infinite]
    best = vmin(finite)
    argmin = next(k for k, v in enumerate(vals) if v == best)
    tail = (K + 1) * L.mu(n + 1) + (n - 1) * L.v_1
    certified = best.is_exact and tail > best.value
    return {"n": n, "K": K, "min_val": best, "argmin": argmin, "tail_bound": tail, "certified": certified}


def log_P(L: LTLike, n_levels: int) -> TruncSeries:
    """``X * prod_{k <= n_levels} Q_k(X) / p_1``."""
    out = TruncSeries.X(L.F)
    inv = L.p_1.inverse()
    for k in range(1, n_levels + 1):
        out = out * shell_series(L, k).scale(inv)
    return out


def p_order_profile(f: TruncSeries, L: LTLike, n_max: int) -> list[ValResult]:
    """``V(f, mu_n) + n*v_1`` for ``n = 1..n_max``."""
    f = _as_field(L, f)
    return [gauss_V(f, L.mu(n)) + n * L.v_1 for n in range(1, n_max + 1)]


def wellsep_check(vals: Sequence[Fraction], pair_vals: dict) -> bool:
    """``val(a_i - a_j) == min(val a_i, val a_j)`` for every listed pair."""
    n = len(vals)
    for i in range(n):
        for j in range(i + 1, n):
            v = pair_vals.get((i, j), pair_vals.get((j, i)))
            if v is None:
                raise KeyError(f"missing pair ({i}, {j})")
            if Fraction(v) != min(Fraction(vals[i]), Fraction(vals[j])):
                return False
    return True
