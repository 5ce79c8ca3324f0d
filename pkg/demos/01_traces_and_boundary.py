"""Traces along P, and how the level-n shells see the Gauss norm.

Take P = (1+X)^2 - 1 over Q_2.  The iterated roots of P are the 2-power
roots of unity shifted by -1; the shell of depth n sits on the circle of
valuation mu_n = 1/2^(n-1).  We look at a random integral polynomial f and
watch min over the first n shells of val f(z) fall towards the Gauss
valuation V(f, 0) as n grows.
"""

import random

from padic_lab import Qp, TruncSeries, boundary_gap, cyclotomic_P, gauss_V, psi, psi_iter_zero, lambda_sum_oracle

Q2 = Qp(2)
L = cyclotomic_P(2)
rng = random.Random(2024)

f = TruncSeries(Q2, [rng.randrange(-64, 64) for _ in range(8)] + [1])
print("f coefficients:", [c.rational() for c in f.coeffs])
print("V(f, 0)       :", gauss_V(f, 0))

# psi lands in v_1 * integral series (v_1 = val 2 = 1 here)
g = psi(L, f)
print("psi(f)        :", [str(c.rational()) for c in g.coeffs[:6]], "...")

# the trace-sum identity, checked exactly
for n in range(1, 4):
    a, b = psi_iter_zero(L, f, n), lambda_sum_oracle(L, f, n)
    print(f"psi^{n}(f)(0) = {a.rational()}   sum over roots = {b.rational()}")

print("\n n   #shell   mu_n      gap(n)")
for row in boundary_gap(L, f, 6):
    print(f"{row['n']:2d} {row['q_n']:7d}   {str(row['mu_n']):8s}  {row['gap']}")
print("\ngap(n) never goes negative; by n = 6 the shells already see the Gauss norm.")
