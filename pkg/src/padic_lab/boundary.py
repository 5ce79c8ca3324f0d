"""Divisor machinery over the torsion of a Lubin-Tate module.

Points of ``LT[pi^N]`` are written as base-pi digit tuples of length ``N``:
``(d_0, ..., d_{N-1})`` names ``[sum d_i pi^i](z_N)``.  Two points differ by
a point of exact order ``N - j`` where ``j`` is the first index at which their
digits differ, so every pairwise valuation is a shell valuation ``mu_{N-j}``.
This makes the valuation bookkeeping for ``B_n`` and ``D_n`` exact and cheap.

The quotient-ring route evaluates the same functions on actual values inside
``Q_p[z]/(W_N(z))`` (base field Q_p only) and serves as the cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .lubintate import FormalModule, TorsionLabel, torsion_embed, torsion_field
from .padics import INFINITE, Exact, ExtElem, LocalField, ValResult, val_ge, vmin
from .powseries import TruncSeries, gauss_V

__all__ = [
    "BSelection",
    "AuxFunction",
    "ExtractReport",
    "points",
    "shell_points",
    "digits_to_label",
    "pair_val",
    "bn_select",
    "bn_constraints_ok",
    "dn_val_at",
    "valdn_bound",
    "divisor_product",
    "ell",
    "constfun_build",
    "embedded_points",
    "aux_values",
    "nulsum_partial",
    "extract_coeff",
]


# --------------------------------------------------------------------------
# labels as digit tuples
# --------------------------------------------------------------------------


def points(q: int, n: int) -> list[tuple]:
    """All of ``Lambda_n`` as level-``n`` digit tuples, lexicographic."""
    return list(itertools.product(range(q), repeat=n))


def shell_points(q: int, n: int) -> list[tuple]:
    """``H_n``: points of exact order ``n`` (leading digit nonzero)."""
    return [d for d in points(q, n) if d[0] != 0]


def lift(d: tuple, N: int) -> tuple:
    """Rewrite a level-``len(d)`` point at level ``N``."""
    return (0,) * (N - len(d)) + tuple(d)


def order(d: tuple) -> int:
    for j, x in enumerate(d):
        if x:
            return len(d) - j
    return 0


def pair_order(u: tuple, v: tuple) -> int:
    """Exact order of ``u (-) v`` (both at the same level)."""
    for j, (a, b) in enumerate(zip(u, v)):
        if a != b:
            return len(u) - j
    return 0


def pair_val(mu, u: tuple, v: tuple) -> ValResult:
    """``val(u - v)``; ``mu`` maps an order ``k >= 1`` to ``mu_k``."""
    N = max(len(u), len(v))
    k = pair_order(lift(u, N), lift(v, N))
    return INFINITE if k == 0 else Exact(mu(k))


def digits_to_label(M: FormalModule, d: tuple) -> TorsionLabel:
    F = M.F
    reps = F.residue_reps()
    a = F.zero()
    pik = F.one()
    for x in d:
        a = a + reps[x] * pik
        pik = pik * F.pi
    return TorsionLabel(len(d), a)


# --------------------------------------------------------------------------
# B_n selection and D_n
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BSelection:
    n: int
    lam: Fraction
    q: int
    labels: tuple  # level-n digit tuples

    @property
    def card(self) -> int:
        return len(self.labels)


def _floor(x: Fraction) -> int:
    return math.floor(x)


def bn_select(M: FormalModule, n: int, lam) -> BSelection:
    """Greedy ``B_n`` subset of ``H_n`` with ``card = floor(lam*q_n)``.

    Level ``k`` of the construction makes each fiber of ``[pi^k]`` over
    ``H_{n-k}`` hold ``floor(lam*q^k)`` chosen points, keeping earlier choices
    and adding the lexicographically smallest missing points.
    """
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise ValueError("lambda must lie in [0, 1]")
    q = M.q
    H = shell_points(q, n)
    chosen: set = set()
    for k in range(1, n):
        need = _floor(lam * q**k)
        fibers: dict = {}
        for z in H:
            fibers.setdefault(z[: n - k], []).append(z)
        for pts in fibers.values():
            have = [z for z in pts if z in chosen]
            for z in pts:
                if len(have) >= need:
                    break
                if z not in chosen:
                    chosen.add(z)
                    have.append(z)
    target = _floor(lam * (q - 1) * q ** (n - 1))
    for z in H:
        if len(chosen) >= target:
            break
        chosen.add(z)
    return BSelection(n, lam, q, tuple(sorted(chosen)))


def bn_constraints_ok(B: BSelection) -> bool:
    """Exhaustive check of the cardinality and fiber constraints."""
    n, q, lam = B.n, B.q, B.lam
    if B.card != _floor(lam * (q - 1) * q ** (n - 1)):
        return False
    Bset = set(B.labels)
    if not Bset <= set(shell_points(q, n)):
        return False
    for z in shell_points(q, n):
        for k in range(1, n):
            cnt = sum(1 for w in Bset if w[: n - k] == z[: n - k])
            if cnt < _floor(lam * q**k):
                return False
    return True


def dn_val_at(M: FormalModule, B: BSelection, z: tuple) -> ValResult:
    """``val D_n(z) = sum_{w in B} (val(z - w) - mu_n)``."""
    mu = M.L.mu
    total = Fraction(0)
    for w in B.labels:
        v = pair_val(mu, z, w)
        if v.is_infinite:
            return INFINITE
        total += v.value - mu(B.n)
    return Exact(total)


def valdn_bound(M: FormalModule, n: int, lam) -> Fraction:
    """``(n-1)*lam*v_1 - mu_1``; the valuation of ``D_n`` off ``B_n`` exceeds it."""
    return (n - 1) * Fraction(lam) * M.L.v_1 - M.L.mu(1)


# --------------------------------------------------------------------------
# embedded points and products
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _embedded(M: FormalModule, N: int) -> dict:
    K = torsion_field(M, N)
    out = {}
    for d in points(M.q, N):
        out[d] = torsion_embed(M, digits_to_label(M, d))
    return out


def embedded_points(M: FormalModule, N: int) -> dict:
    """Every point of ``Lambda_N`` as an element of ``Q_p[z]/(W_N)``."""
    return _embedded(M, N)


def divisor_product(M: FormalModule, selections, N: int | None = None) -> TruncSeries:
    """``prod_k prod_{w in B_k} (1 - X/w)`` with coefficients in ``K_N``."""
    selections = list(selections)
    if N is None:
        N = max((B.n for B in selections), default=1)
    K = torsion_field(M, max(N, 1))
    emb = embedded_points(M, max(N, 1))
    f = TruncSeries.const(K, 1)
    for B in selections:
        for w in B.labels:
            inv = emb[lift(w, N)].inverse()
            f = f * TruncSeries(K, [K.one(), -inv])
    return f


# --------------------------------------------------------------------------
# the auxiliary function f_{eps,m}
# --------------------------------------------------------------------------


def ell(q: int, eps: Fraction, n: int) -> int:
    """Least ``l >= 1`` with ``q^(-l) <= eps/(2n)``."""
    eps = Fraction(eps)
    l = 1
    while Fraction(1, q**l) > eps / (2 * n):
        l += 1
    return l


@dataclass
class AuxFunction:
    """``f = -prod_{k <= n_max} D_k`` for the schedule ``lambda_k = 1 - delta_k``."""

    module: FormalModule
    eps: Fraction
    m: int
    m_requested: int
    n_max: int
    deltas: tuple
    selections: tuple
    sign: int = -1

    @property
    def lambdas(self):
        return tuple(1 - d for d in self.deltas)

    def val_at(self, z: tuple) -> ValResult:
        """Exact ``val f(z)`` by the label calculus (``z`` any level)."""
        mu = self.module.L.mu
        N = max(len(z), self.n_max)
        zz = lift(z, N)
        total = Fraction(0)
        for B in self.selections:
            for w in B.labels:
                v = pair_val(mu, zz, lift(w, N))
                if v.is_infinite:
                    return INFINITE
                total += v.value - mu(B.n)
        return Exact(total)

    def min_val(self, n: int | None = None) -> ValResult:
        """``min`` over ``Lambda_n`` of ``val f``; zeros are skipped."""
        n = self.n_max if n is None else n
        vals = [self.val_at(z) for z in points(self.module.q, n)]
        finite = [v for v in vals if not v.is_infinite]
        return vmin(finite) if finite else INFINITE

    def V(self, mu) -> Fraction:
        """``V(f, mu) = sum_k b_k * min(0, mu - mu_k)``."""
        mu = Fraction(mu)
        L = self.module.L
        return sum((B.card * min(Fraction(0), mu - L.mu(B.n)) for B in self.selections), Fraction(0))

    def p_order_profile(self) -> list[Fraction]:
        L = self.module.L
        return [self.V(L.mu(n)) + n * L.v_1 for n in range(1, self.n_max + 1)]

    def series(self) -> TruncSeries:
        return divisor_product(self.module, self.selections, self.n_max).scale(self.sign)


def constfun_build(M: FormalModule, eps, m: int, n_max: int, raise_m: bool = True) -> AuxFunction:
    """Selection schedule for ``f_{eps,m}`` truncated at level ``n_max``.

    With ``raise_m`` the level ``m`` is increased until ``ell(n) <= n-1`` for
    every ``n > m``, which makes ``delta_n * q_n`` an integer.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("need 0 < eps < 1")
    q = M.q
    m_req = m
    if raise_m:
        n0 = m + 1
        while ell(q, eps, n0) > n0 - 1:
            n0 += 1
        m = n0 - 1
    deltas = tuple(Fraction(0) if k <= m else Fraction(1, q ** ell(q, eps, k)) for k in range(1, n_max + 1))
    sels = tuple(bn_select(M, k, 1 - deltas[k - 1]) for k in range(1, n_max + 1))
    return AuxFunction(M, eps, m, m_req, n_max, deltas, sels)


def aux_values(aux: AuxFunction, N: int | None = None) -> dict:
    """``f(z)`` for every ``z`` in ``Lambda_N`` by direct products in ``K_N``."""
    M = aux.module
    N = max(aux.n_max, N or 0)
    emb = embedded_points(M, N)
    K = torsion_field(M, N)
    inv = {}
    for B in aux.selections:
        for w in B.labels:
            inv[lift(w, N)] = emb[lift(w, N)].inverse()
    out = {}
    for z, x in emb.items():
        val = K.one().scale(aux.sign)
        for w, wi in inv.items():
            val = val * (K.one() - x * wi)
            if val.is_zero():
                break
        out[z] = val
    return out


def nulsum_partial(aux: AuxFunction, i: int, n: int, values: dict | None = None) -> ExtElem:
    """``sum_{z in Lambda_n} z^i f(z)`` computed in ``K_N``."""
    M = aux.module
    N = max(aux.n_max, n)
    values = aux_values(aux, N) if values is None else values
    emb = embedded_points(M, N)
    K = torsion_field(M, N)
    acc = K.zero()
    for d in points(M.q, n):
        z = lift(d, N)
        acc = acc + emb[z] ** i * values[z]
    return acc


# --------------------------------------------------------------------------
# coefficient extraction
# --------------------------------------------------------------------------


@dataclass
class ExtractReport:
    index: int
    val_coeff: ValResult
    min_val_h: ValResult  # min over Lambda_{n_max} minus Lambda_m of val h(z)
    eps_used: Fraction  # -min val f on the same set
    val_R: ValResult  # val of sum_{Lambda_{n_max}} f*h
    R_bound: ValResult  # a priori lower bound on val_R from the psi estimate
    tail: Fraction
    rhs: ValResult
    ok: bool | None
    strict_ok: bool | None  # without any tail term
    identity_ok: bool  # h_0 == sum over the outer shells of f*h minus R, exactly

    def to_json(self):
        return {
            "index": self.index,
            "lhs": self.val_coeff.to_json(),
            "rhs": self.rhs.to_json(),
            "min_val_h": self.min_val_h.to_json(),
            "eps_used": str(self.eps_used),
            "val_R": self.val_R.to_json(),
            "R_bound": self.R_bound.to_json(),
            "tail": str(self.tail),
            "pass": self.ok,
            "strict_pass": self.strict_ok,
            "identity_ok": self.identity_ok,
        }


def _extract_one(aux, h: TruncSeries, index: int, values, eps) -> ExtractReport:
    M = aux.module
    L = M.L
    N = aux.n_max
    K = torsion_field(M, N)
    emb = embedded_points(M, N)
    hK = h.change_ring(K)
    outer = [lift(d, N) for d in points(M.q, N) if order(d) > aux.m_requested]
    hvals = {z: hK(emb[z]) for z in emb}
    min_h = vmin([hvals[z].val() for z in outer]) if outer else INFINITE
    fv = [aux.val_at(z) for z in outer]
    finite = [v.value for v in fv if not v.is_infinite]
    eps_used = -min(finite) if finite else Fraction(0)
    R = K.zero()
    S = K.zero()
    outer_set = set(outer)
    for z in emb:
        t = values[z] * hvals[z]
        R = R + t
        if z in outer_set:
            S = S + t
    fh = aux.series() * hK
    R_bound = gauss_V(fh, L.mu(N + 1)) + (N - 1) * L.v_1
    c = h[0] if len(h.coeffs) else h.field.zero()
    val_c = c.val()
    val_R = R.val()
    identity_ok = (S - R - K.from_coords([c.coords()[0]], c.prec)).is_zero()
    if min_h.is_infinite:
        rhs_core = INFINITE
    else:
        rhs_core = min_h - Fraction(eps)
    if rhs_core.is_infinite or R_bound.is_infinite:
        tail = Fraction(0)
    else:
        tail = max(Fraction(0), rhs_core.value - R_bound.value)
    rhs = rhs_core if rhs_core.is_infinite else rhs_core - tail
    return ExtractReport(index, val_c, min_h, eps_used, val_R, R_bound, tail, rhs, val_ge(val_c, rhs), val_ge(val_c, rhs_core), identity_ok)


def extract_coeff(h: TruncSeries, M: FormalModule, m: int, eps, n_max: int, raise_m: bool = True, depth: int = 2) -> list[ExtractReport]:
    """Compare ``val(h_i)`` with ``min val h`` over ``Lambda_{n_max} minus Lambda_m``.

    Row ``i`` applies the estimate to ``(h - h_0 - ... - h_{i-1} X^{i-1}) / X^i``.
    The tail term is ``max(0, A - eps - B)`` where ``A`` is the minimum of
    ``val h`` on the outer shells and ``B`` the a priori lower bound on the
    valuation of the full sum over ``Lambda_{n_max}``.
    """
    if not h.is_poly:
        raise ValueError("extract_coeff needs a polynomial h")
    aux = constfun_build(M, eps, m, n_max, raise_m=raise_m)
    values = aux_values(aux)
    out = []
    g = h
    for i in range(depth):
        out.append(_extract_one(aux, g, i, values, eps))
        g = TruncSeries(g.field, g.coeffs[1:])
    return out
