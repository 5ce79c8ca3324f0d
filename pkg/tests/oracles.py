"""Independent reference computations built on sympy."""

from fractions import Fraction

import sympy

t, X, Y = sympy.symbols("t X Y")


def vp_rational(x, p):
    x = Fraction(x)
    if x == 0:
        return None
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def norm(g, coords):
    """N(a(t)) for the monic defining polynomial ``g`` (low-to-high coefficients)."""
    if all(Fraction(c) == 0 for c in coords):
        return Fraction(0)
    return resultant(g, coords)


def ext_valuation(field, coords):
    """val_p of an element via its norm: val = val_p(N(x)) / d."""
    n = norm(field.g, coords)
    v = vp_rational(n, field.p)
    return None if v is None else Fraction(v, field.d)


def _companion(cs):
    """Companion matrix of a monic rational polynomial (low-to-high coefficients)."""
    n = len(cs) - 1
    C = sympy.zeros(n, n)
    for i in range(1, n):
        C[i, i - 1] = 1
    for i in range(n):
        c = Fraction(cs[i]) / Fraction(cs[-1])
        C[i, n - 1] = -sympy.Rational(c.numerator, c.denominator)
    return C


def _to_frac(r):
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def resultant(a, b):
    """Res(A, B) = prod over roots of the monic A of B, as det B(C_A)."""
    C = _companion(a)
    n = C.shape[0]
    acc = sympy.zeros(n, n)
    Pw = sympy.eye(n)
    for c in b:
        c = Fraction(c)
        acc += sympy.Rational(c.numerator, c.denominator) * Pw
        Pw = Pw * C
    return _to_frac(acc.det())


def power_sums(coeffs, K):
    """Sum of k-th powers of the roots of a rational polynomial, by companion matrix traces."""
    cs = [Fraction(c) for c in coeffs]
    lead = cs[-1]
    n = len(cs) - 1
    C = sympy.zeros(n, n)
    for i in range(1, n):
        C[i, i - 1] = 1
    for i in range(n):
        c = cs[i] / lead
        C[i, n - 1] = -sympy.Rational(c.numerator, c.denominator)
    out = []
    P = sympy.eye(n)
    for _ in range(K):
        tr = sympy.Rational(P.trace())
        out.append(Fraction(int(tr.p), int(tr.q)))
        P = P * C
    return out


def psi_poly(P, f):
    """psi(f)(Y) = sum over roots x of P(x) = Y of f(x), as rational coefficients in Y.

    Uses symmetric functions of the roots of P(X) - Y over Q[Y] through the
    companion matrix of that polynomial.
    """
    Pc = [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in P]
    q = len(Pc) - 1
    lead = Pc[-1]
    coeffs = [Pc[0] - Y] + Pc[1:]
    C = sympy.zeros(q, q)
    for i in range(1, q):
        C[i, i - 1] = 1
    for i in range(q):
        C[i, q - 1] = -coeffs[i] / lead
    acc = sympy.zeros(q, q)
    Pw = sympy.eye(q)
    for c in f:
        acc += sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * Pw
        Pw = Pw * C
    expr = sympy.expand(acc.trace())
    poly = sympy.Poly(expr, Y)
    if poly.is_zero:
        return []
    out = [Fraction(0)] * (poly.degree() + 1)
    for (k,), c in poly.terms():
        c = sympy.Rational(c)
        out[k] = Fraction(int(c.p), int(c.q))
    return out


def compose_iter(P, n):
    """Coefficients of P composed with itself n times."""
    Pe = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * X**i for i, c in enumerate(P))
    e = X
    for _ in range(n):
        e = sympy.expand(Pe.subs(X, e))
    poly = sympy.Poly(e, X)
    out = [Fraction(0)] * (poly.degree() + 1)
    for (k,), c in poly.terms():
        c = sympy.Rational(c)
        out[k] = Fraction(int(c.p), int(c.q))
    return out


def charpoly_mod(W, f):
    """Res_X(W(X), T - f(X)) for a monic rational W: the char poly of f mod W."""
    T = sympy.Symbol("T")
    We = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * X**i for i, c in enumerate(W))
    fe = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * X**i for i, c in enumerate(f))
    r = sympy.Poly(sympy.resultant(We, T - fe, X), T)
    out = [Fraction(0)] * (r.degree() + 1)
    for (k,), c in r.terms():
        c = sympy.Rational(c)
        out[k] = Fraction(int(c.p), int(c.q))
    return out


def np_root_vals(coeffs, p):
    """Root valuations of a rational polynomial, by brute-force slope search."""
    pts = [(i, vp_rational(c, p)) for i, c in enumerate(coeffs) if c != 0]
    zeros = pts[0][0] if pts else len(coeffs) - 1
    out = [None] * zeros  # roots at 0
    i = 0
    while i < len(pts) - 1:
        x0, y0 = pts[i]
        best, bj = None, None
        for j in range(i + 1, len(pts)):
            x1, y1 = pts[j]
            s = Fraction(y1 - y0, x1 - x0)
            if best is None or s <= best:
                best, bj = s, j
        x1 = pts[bj][0]
        out += [-best] * (x1 - x0)
        i = bj
    return out
