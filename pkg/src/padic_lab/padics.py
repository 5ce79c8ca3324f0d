"""Finite-precision arithmetic in Q_p and in single-step extensions of Q_p.

Elements of an extension ``F = Q_p[t]/(g)`` are stored as rational coordinates
on the power basis ``1, t, ..., t^(d-1)`` over a common integer denominator,
together with an absolute precision ``prec``: the element is known modulo the
fractional ideal ``{y : val(y) >= prec}``.  ``prec=None`` means exact.

Valuations are normalized with ``val(p) = 1`` and are always ``Fraction``.
Capped elements are kept in a canonical reduced form, so a capped element is
indistinguishable from zero exactly when all its coordinates are zero.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "ValResult",
    "Exact",
    "AtLeast",
    "INFINITE",
    "vmin",
    "val_ge",
    "vp",
    "PadicApprox",
    "padic_from_int",
    "LocalField",
    "ExtElem",
    "PrecisionError",
    "Qp",
    "field_create",
    "ext_arith",
    "ext_charpoly",
    "ext_val",
    "charpoly_matrix",
]


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the available precision."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    if p == 2:
        n = abs(n)
        return (n & -n).bit_length() - 1
    v = 0
    # strip p^(2^k) chunks first so large valuations stay cheap
    pk, k = p, 1
    while n % pk == 0:
        n //= pk
        v += k
        pk, k = pk * pk, 2 * k
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_frac(x: Fraction, p: int) -> int:
    return vp(x.numerator, p) - vp(x.denominator, p)


# --------------------------------------------------------------------------
# Valuation reporting
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ValResult:
    """A valuation known exactly, known only from below, or infinite."""

    kind: str  # "exact" | "atleast" | "infinite"
    value: Fraction | None = None

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    @property
    def lower(self) -> Fraction | None:
        """Largest certified lower bound (``None`` for infinity)."""
        return self.value

    def __add__(self, other) -> "ValResult":
        if not isinstance(other, ValResult):
            other = Exact(other)
        if self.is_infinite or other.is_infinite:
            return INFINITE
        kind = "exact" if self.is_exact and other.is_exact else "atleast"
        return ValResult(kind, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other) -> "ValResult":
        # shifting by an exact rational only
        return self + (-_frac(other))

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        s = str(self.value)
        return s if self.is_exact else ">=" + s

    def to_json(self):
        if self.is_infinite:
            return "inf"
        return str(self.value) if self.is_exact else ">=" + str(self.value)


def Exact(v) -> ValResult:
    return ValResult("exact", _frac(v))


def AtLeast(v) -> ValResult:
    return ValResult("atleast", _frac(v))


INFINITE = ValResult("infinite", None)


def vmin(vals: Iterable[ValResult]) -> ValResult:
    """Minimum of a finite family of valuations (``INFINITE`` if empty)."""
    best_exact = None
    best_bound = None
    for v in vals:
        if v.is_infinite:
            continue
        if v.is_exact:
            if best_exact is None or v.value < best_exact:
                best_exact = v.value
        elif best_bound is None or v.value < best_bound:
            best_bound = v.value
    if best_exact is None and best_bound is None:
        return INFINITE
    if best_bound is None:
        return Exact(best_exact)
    if best_exact is not None and best_exact <= best_bound:
        return Exact(best_exact)
    return AtLeast(best_bound)


def val_ge(lhs: ValResult, rhs: ValResult | Fraction | int) -> bool | None:
    """Decide ``lhs >= rhs``; ``None`` when precision leaves it open."""
    if not isinstance(rhs, ValResult):
        rhs = Exact(rhs)
    if lhs.is_infinite:
        return True
    if rhs.is_infinite:
        return False if lhs.is_exact else None
    if lhs.is_exact and rhs.is_exact:
        return lhs.value >= rhs.value
    if lhs.is_exact:  # rhs only bounded below
        return False if lhs.value < rhs.value else None
    if rhs.is_exact:
        return True if lhs.value >= rhs.value else None
    return None


# --------------------------------------------------------------------------
# Z_p approximations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PadicApprox:
    """An element of Z_p known modulo p^prec."""

    p: int
    mantissa: int
    prec: int
    is_exact_zero: bool = False

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("absolute precision must be >= 1")
        if not self.is_exact_zero and not 0 <= self.mantissa < self.p**self.prec:
            raise ValueError("mantissa out of range")

    def valuation(self) -> ValResult:
        if self.is_exact_zero:
            return INFINITE
        if self.mantissa == 0:
            return AtLeast(self.prec)
        return Exact(vp(self.mantissa, self.p))

    def _combine(self, other, op):
        if isinstance(other, int):
            other = padic_from_int(self.p, other, self.prec)
        if other.p != self.p:
            raise ValueError("different primes")
        if self.is_exact_zero and other.is_exact_zero:
            return self
        n = min(self.prec, other.prec)
        m = op(self.mantissa, other.mantissa) % self.p**n
        return PadicApprox(self.p, m, n)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other):
        if isinstance(other, PadicApprox) and (self.is_exact_zero or other.is_exact_zero):
            return PadicApprox(self.p, 0, max(self.prec, other.prec), True)
        return self._combine(other, lambda a, b: a * b)

    def __neg__(self):
        if self.is_exact_zero:
            return self
        return PadicApprox(self.p, (-self.mantissa) % self.p**self.prec, self.prec)

    def __eq__(self, other):
        if isinstance(other, int):
            other = padic_from_int(self.p, other, self.prec)
        if not isinstance(other, PadicApprox):
            return NotImplemented
        if self.is_exact_zero and other.is_exact_zero:
            return True
        n = min(self.prec, other.prec)
        return (self.mantissa - other.mantissa) % self.p**n == 0

    __hash__ = None


def padic_from_int(p: int, n: int, N: int) -> PadicApprox:
    """The integer ``n`` viewed in Z_p modulo p^N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if n == 0:
        return PadicApprox(p, 0, N, True)
    return PadicApprox(p, n % p**N, N)


# --------------------------------------------------------------------------
# Fields
# --------------------------------------------------------------------------


def _poly_mod_p_irreducible(g: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p via gcd(x^(p^i) - x, g) = 1 for i <= d/2."""
    g = [c % p for c in g]
    d = len(g) - 1
    if d <= 0 or g[-1] == 0:
        return False

    def trim(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def pmod(a, b):
        a = trim(a[:])
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            s = len(a) - len(b)
            for i, bc in enumerate(b):
                a[s + i] = (a[s + i] - c * bc) % p
            trim(a)
        return a

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return out

    def ppow(a, n, m):
        r, a = [1], pmod(a, m)
        while n:
            if n & 1:
                r = pmod(pmul(r, a), m)
            a = pmod(pmul(a, a), m)
            n >>= 1
        return r

    def pgcd(a, b):
        a, b = trim(a[:]), trim(b[:])
        while b:
            a, b = b, pmod(a, b)
        return a

    x = [0, 1]
    h = x
    for _ in range(d // 2):
        h = ppow(h, p, g)
        diff = h[:] + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(pgcd(g, trim(diff))) > 1:
            return False
    return True


class LocalField:
    """``Q_p[t]/(g)`` for ``g`` of kind ``Qp`` (g = t), Eisenstein or unramified."""

    def __init__(self, p: int, g: Sequence[int], kind: str):
        self.p = p
        self.g = tuple(int(c) for c in g)
        self.kind = kind
        self.d = len(self.g) - 1
        if kind == "Qp":
            self.e, self.f = 1, 1
        elif kind == "Eisenstein":
            self.e, self.f = self.d, 1
        else:
            self.e, self.f = 1, self.d
        self.q = p**self.f
        self.weights = tuple(
            Fraction(i, self.e) if kind == "Eisenstein" else Fraction(0) for i in range(self.d)
        )
        # t^k mod g for d <= k <= 2d-2, as integer coordinate vectors
        red = []
        cur = [-c for c in self.g[:-1]]
        for _ in range(max(0, self.d - 1)):
            red.append(cur)
            nxt = [0] + cur[:-1]
            top = cur[-1]
            cur = [nxt[i] - top * self.g[i] for i in range(self.d)]
        self._red = red
        self._zero = ExtElem(self, (0,) * self.d, 1, None)
        self._one = ExtElem(self, (1,) + (0,) * (self.d - 1), 1, None)

    # identity ------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, LocalField) and (self.p, self.g, self.kind) == (
            other.p,
            other.g,
            other.kind,
        )

    def __hash__(self):
        return hash((self.p, self.g, self.kind))

    def __repr__(self):
        if self.kind == "Qp":
            return f"Q_{self.p}"
        return f"LocalField(p={self.p}, g={list(self.g)}, {self.kind})"

    # element construction --------------------------------------------------
    def __call__(self, x, prec=None) -> "ExtElem":
        if isinstance(x, ExtElem):
            if x.field != self:
                raise ValueError("element of a different field")
            return x if prec is None else x.add_prec(prec)
        if isinstance(x, PadicApprox):
            if x.p != self.p:
                raise ValueError("different primes")
            cap = None if x.is_exact_zero else x.prec
            return self.from_coords([x.mantissa], cap if prec is None else min(cap, prec))
        if isinstance(x, (list, tuple)):
            return self.from_coords(x, prec)
        return self.from_coords([x], prec)

    def from_coords(self, coords, prec=None) -> "ExtElem":
        coords = [_frac(c) for c in coords]
        if len(coords) > self.d:
            raise ValueError("too many coordinates")
        coords += [Fraction(0)] * (self.d - len(coords))
        den = math.lcm(*(c.denominator for c in coords)) if coords else 1
        num = tuple(c.numerator * (den // c.denominator) for c in coords)
        return ExtElem._make(self, num, den, None if prec is None else _frac(prec))

    def zero(self) -> "ExtElem":
        return self._zero

    def one(self) -> "ExtElem":
        return self._one

    @property
    def gen(self) -> "ExtElem":
        if self.d == 1:
            return self.from_coords([-self.g[0]])
        return self.from_coords([0, 1])

    @property
    def pi(self) -> "ExtElem":
        return self.gen if self.kind == "Eisenstein" else self.from_coords([self.p])

    @property
    def val_pi(self) -> Fraction:
        return Fraction(1, self.e)

    def residue_reps(self) -> list["ExtElem"]:
        """Lifts of the q residue classes, digits on the unramified basis."""
        if self.kind == "Unramified":
            out = []
            for k in range(self.q):
                digits = [(k // self.p**i) % self.p for i in range(self.d)]
                out.append(self.from_coords(digits))
            return out
        return [self.from_coords([a]) for a in range(self.p)]

    def basis(self) -> list["ExtElem"]:
        return [self.from_coords([0] * i + [1]) for i in range(self.d)]


@functools.lru_cache(maxsize=None)
def Qp(p: int) -> LocalField:
    return LocalField(p, (0, 1), "Qp")


def field_create(p: int, g: Sequence[int], kind: str) -> LocalField:
    """Validate ``g`` against ``kind`` and build the field."""
    g = tuple(int(c) for c in g)
    if p < 2 or any(p % k == 0 for k in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")
    if len(g) < 2 or g[-1] != 1:
        raise ValueError("g must be monic of degree >= 1")
    if kind == "Qp":
        if g != (0, 1):
            raise ValueError("kind Qp expects g = t")
    elif kind == "Eisenstein":
        if any(c % p for c in g[:-1]) or g[0] % (p * p) == 0:
            raise ValueError("g is not Eisenstein at p")
    elif kind == "Unramified":
        if not _poly_mod_p_irreducible(g, p):
            raise ValueError("g mod p is reducible")
    else:
        raise ValueError(f"unknown field kind {kind!r}")
    if kind == "Qp":
        return Qp(p)
    return LocalField(p, g, kind)


# --------------------------------------------------------------------------
# Elements
# --------------------------------------------------------------------------


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


class ExtElem:
    """Element of a :class:`LocalField`, exact or with absolute precision."""

    __slots__ = ("field", "num", "den", "prec", "_val")

    def __init__(self, field, num, den, prec):
        self.field = field
        self.num = num
        self.den = den
        self.prec = prec
        self._val = False

    @staticmethod
    def _make(field, num, den, prec) -> "ExtElem":
        p = field.p
        if prec is None:
            g = math.gcd(den, *num)
            if g > 1:
                num = tuple(c // g for c in num)
                den //= g
            if den < 0:
                num = tuple(-c for c in num)
                den = -den
            return ExtElem(field, num, den, None)
        s = vp(den, p)
        ps = p**s
        u = den // ps
        out = []
        big = 0
        for c, w in zip(num, field.weights):
            m = _ceil(prec - w) + s
            if m <= 0 or c == 0:
                out.append(0)
                continue
            mod = p**m
            if u != 1:
                c = c * pow(u, -1, mod)
            c %= mod
            out.append(c)
            big |= c
        if big == 0:
            return ExtElem(field, (0,) * field.d, 1, prec)
        while s > 0 and all(c % p == 0 for c in out):
            out = [c // p for c in out]
            s -= 1
        return ExtElem(field, tuple(out), p**s, prec)

    # basic queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_exact(self) -> bool:
        return self.prec is None

    def coords(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def center_val(self) -> Fraction | None:
        """Valuation of the stored representative (``None`` when it is 0)."""
        if self._val is not False:
            return self._val
        p = self.field.p
        best = None
        for c, w in zip(self.num, self.field.weights):
            if c:
                v = vp(c, p) + w
                if best is None or v < best:
                    best = v
        if best is not None:
            best = Fraction(best) - vp(self.den, p)
        self._val = best
        return best

    def val(self) -> ValResult:
        v = self.center_val()
        if v is None:
            return INFINITE if self.prec is None else AtLeast(self.prec)
        return Exact(v)

    valuation = val

    def is_integral(self) -> bool:
        v = self.center_val()
        return v is None or v >= 0

    def add_prec(self, prec) -> "ExtElem":
        """Cap the precision at ``prec`` (never raises it)."""
        prec = _frac(prec)
        if self.prec is not None and self.prec <= prec:
            return self
        return ExtElem._make(self.field, self.num, self.den, prec)

    def rational(self) -> Fraction:
        """The constant coordinate; requires the element to lie in Q_p."""
        if any(self.num[1:]):
            raise ValueError("element is not in Q_p")
        return Fraction(self.num[0], self.den)

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "ExtElem":
        if isinstance(other, ExtElem):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, PadicApprox):
            return self.field(other)
        if isinstance(other, (int, Fraction)):
            return self.field.from_coords([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = _pmin(self.prec, o.prec)
        if self.den == o.den:
            num = tuple(a + b for a, b in zip(self.num, o.num))
            return ExtElem._make(self.field, num, self.den, prec)
        den = math.lcm(self.den, o.den)
        a, b = den // self.den, den // o.den
        num = tuple(x * a + y * b for x, y in zip(self.num, o.num))
        return ExtElem._make(self.field, num, den, prec)

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.field, tuple(-c for c in self.num), self.den, self.prec)._renorm()

    def _renorm(self):
        return ExtElem._make(self.field, self.num, self.den, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        F = self.field
        a, b = self.num, o.num
        d = F.d
        if d == 1:
            num = (a[0] * b[0],)
        else:
            prod = [0] * (2 * d - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            prod[i + j] += x * y
            num = prod[:d]
            for k in range(d, 2 * d - 1):
                c = prod[k]
                if c:
                    r = F._red[k - d]
                    for i in range(d):
                        num[i] += c * r[i]
            num = tuple(num)
        prec = _mul_prec(self, o)
        return ExtElem._make(F, num, self.den * o.den, prec)

    __rmul__ = __mul__

    def inverse(self) -> "ExtElem":
        v = self.center_val()
        if v is None:
            raise PrecisionError("inverse of an element indistinguishable from 0")
        if self.prec is not None and v >= self.prec:
            raise PrecisionError("inverse of an element indistinguishable from 0")
        inv_coords = _exact_inverse(self)
        prec = None if self.prec is None else self.prec - 2 * v
        return self.field.from_coords(inv_coords, prec)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            c = Fraction(1) / _frac(other)
            return self.scale(c)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def scale(self, c) -> "ExtElem":
        """Multiply by an exact rational."""
        c = _frac(c)
        if c == 0:
            return ExtElem(self.field, (0,) * self.field.d, 1, None)
        prec = None if self.prec is None else self.prec + vp_frac(c, self.field.p)
        num = tuple(x * c.numerator for x in self.num)
        return ExtElem._make(self.field, num, self.den * c.denominator, prec)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, ExtElem) else other
        if o is NotImplemented:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def __repr__(self):
        F = self.field
        terms = []
        for i, c in enumerate(self.coords()):
            if c:
                terms.append(str(c) if i == 0 else f"{c}*t^{i}" if i > 1 else f"{c}*t")
        body = " + ".join(terms) if terms else "0"
        if self.prec is not None:
            body += f" + O(p^{self.prec})"
        return body if F.d > 1 or F.kind == "Qp" else body


def _pmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a < b else b


def _mul_prec(x: ExtElem, y: ExtElem):
    if x.prec is None and y.prec is None:
        return None
    cands = []
    vx, vy = x.center_val(), y.center_val()
    if y.prec is not None and vx is not None:
        cands.append(vx + y.prec)
    if x.prec is not None and vy is not None:
        cands.append(vy + x.prec)
    if x.prec is not None and y.prec is not None:
        cands.append(x.prec + y.prec)
    if not cands:
        return None  # exact zero times anything
    return min(cands)


def _mult_matrix(x: ExtElem) -> list[list[Fraction]]:
    """Matrix of multiplication by the representative of ``x`` (columns = x*t^j)."""
    F = x.field
    cols = []
    cur = x.field.from_coords(x.coords())
    t = F.gen if F.d > 1 else None
    for j in range(F.d):
        cols.append(cur.coords())
        if t is not None and j + 1 < F.d:
            cur = cur * t
    return [[cols[j][i] for j in range(F.d)] for i in range(F.d)]


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        row = [v * inv for v in M[c]]
        M[c] = row
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], row)]
    return [M[i][n] for i in range(n)]


def _exact_inverse(x: ExtElem) -> list[Fraction]:
    if x.field.d == 1:
        return [Fraction(x.den, x.num[0])]
    A = _mult_matrix(x)
    e0 = [Fraction(1)] + [Fraction(0)] * (x.field.d - 1)
    return _solve(A, e0)


# --------------------------------------------------------------------------
# Characteristic polynomials
# --------------------------------------------------------------------------


def charpoly_matrix(A, *, is_zero=None, key=None, one=None):
    """Characteristic polynomial ``det(T*I - A)`` (low to high coefficients).

    Works over any ring with field-like division (``Fraction`` or
    :class:`ExtElem`).  Reduction to Hessenberg form uses the pivot minimizing
    ``key`` (the valuation, for p-adic entries).
    """
    n = len(A)
    if is_zero is None:
        is_zero = lambda a: a == 0  # noqa: E731
    if key is None:
        key = lambda a: 0  # noqa: E731
    if one is None:
        one = Fraction(1)
    H = [list(row) for row in A]
    for j in range(n - 2):
        cands = [i for i in range(j + 1, n) if not is_zero(H[i][j])]
        if not cands:
            continue
        piv = min(cands, key=lambda i: key(H[i][j]))
        if piv != j + 1:
            H[piv], H[j + 1] = H[j + 1], H[piv]
            for row in H:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        pv = H[j + 1][j]
        inv = one / pv
        for i in range(j + 2, n):
            if is_zero(H[i][j]):
                continue
            m = H[i][j] * inv
            for c in range(j, n):
                H[i][c] = H[i][c] - m * H[j + 1][c]
            for r in range(n):
                H[r][j + 1] = H[r][j + 1] + m * H[r][i]
    zero = one - one
    polys = [[one]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        hkk = H[k - 1][k - 1]
        cur = [zero] * (k + 1)
        for i, c in enumerate(prev):
            cur[i + 1] = cur[i + 1] + c
            cur[i] = cur[i] - hkk * c
        prod = one
        for i in range(k - 1, 0, -1):
            prod = prod * H[i][i - 1]
            coef = H[i - 1][k - 1] * prod
            if is_zero(coef):
                continue
            for idx, c in enumerate(polys[i - 1]):
                cur[idx] = cur[idx] - coef * c
        polys.append(cur)
    return polys[n]


def ext_charpoly(x: ExtElem) -> list[ExtElem]:
    """Characteristic polynomial of multiplication by ``x`` over Q_p.

    Coefficients are elements of ``Qp(p)`` listed from the constant term up;
    the precision of the coefficient of ``T^(d-j)`` is derived from the
    conjugates: ``prec + (j-1)*min(val(x), prec)``.
    """
    F = x.field
    K = Qp(F.p)
    cp = charpoly_matrix(_mult_matrix(x))
    if x.prec is None:
        return [K.from_coords([c]) for c in cp]
    v = x.center_val()
    v = x.prec if v is None else min(v, x.prec)
    out = []
    for k, c in enumerate(cp):
        j = F.d - k
        cap = None if j == 0 else x.prec + (j - 1) * v
        out.append(K.from_coords([c], cap))
    return out


def ext_val(x: ExtElem) -> ValResult:
    """Valuation of ``x`` read from the Newton polygon of its charpoly."""
    if x.is_zero():
        return INFINITE if x.prec is None else AtLeast(x.prec)
    cp = ext_charpoly(x)
    d = x.field.d
    c0 = cp[0].val()
    if c0.is_infinite:
        return INFINITE if x.prec is None else AtLeast(x.prec)
    slope_val = c0.value / d
    # the charpoly of a field element is a power of an irreducible polynomial,
    # so every root has valuation val(c0)/d once all points lie on that line
    if c0.is_exact:
        ok = True
        for k in range(1, d):
            vk = cp[k].val()
            need = (d - k) * slope_val
            if vk.is_infinite:
                continue
            if vk.value < need:
                ok = False
                break
        if ok:
            return Exact(slope_val)
    # fall back to the smallest slope of the lower hull
    pts = [(k, cp[k].val().value) for k in range(d + 1) if not cp[k].val().is_infinite]
    best = min(Fraction(vk, 1) / (d - k) for k, vk in pts if k < d)
    return AtLeast(min(best, slope_val))


def ext_arith(x: ExtElem, y: ExtElem | None, op: str) -> ExtElem:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    raise ValueError(f"unknown op {op!r}")
