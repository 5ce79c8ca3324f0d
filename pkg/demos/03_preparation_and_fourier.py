"""Weierstrass preparation, Newton polygons, and a finite Fourier transform.

First we factor a 3-adic series f = U W, read root valuations from the
Newton polygon of W, and confirm that f - U W vanishes to working precision.
Then we move to the group Z/9 and check that the character transform inverts
exactly over the field of 9th roots of unity.
"""

from fractions import Fraction

from padic_lab import Qp, TruncSeries, fourier_forward, fourier_invert, newton_polygon, vmin, weierstrass_prep, wideg
from padic_lab.fourier import FiniteFunction, cyclotomic_field, group_elements

Q3 = Qp(3)
# An exact polynomial.  Passing order=20 instead would declare an unknown
# integral tail from X^20 on, and the factors would honestly lose digits.
f = TruncSeries(Q3, [9, 3, 6, 1, 5, 2, 7])
print("wideg(f) =", wideg(f))
W, U = weierstrass_prep(f, N=20, M=20)
print("W =", [str(c.rational()) for c in W.coeffs])
print("root valuations (slope, multiplicity):", newton_polygon(W).root_valuations())
res = (f - U * W).truncate(20)
print("min valuation of f - U W:", vmin([c.val() for c in res.coeffs]), "(target 20)")

# Fourier on Z/9 with values in Q_3
F = cyclotomic_field(3, 2)
pts = group_elements(Q3, 2)
vals = {a: F(Fraction(sum(a) ** 2 % 7)) for a in pts}
fn = FiniteFunction(Q3, 2, vals)
coeffs = fourier_invert(fn)
back = fourier_forward(coeffs)
print("\nround trip exact on", len(pts), "points:", all((back.values[a] - fn.values[a]).is_zero() for a in pts))
print("sup val of function:", fn.sup_val(), "  sup val of coefficients:", coeffs.sup_val())
