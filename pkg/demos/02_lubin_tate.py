"""A Lubin-Tate module over a ramified quadratic extension of Q_3.

The field is Q_3(pi) with pi^2 = 3.  We take the standard [pi](X) = pi X + X^3,
build the group law, the endomorphisms [a], the logarithm and exponential,
and check the laws numerically at p-precision 15 and X-order 20.
"""

from padic_lab import FormalModule, field_create, lt_exp, lt_group_law, lt_log, lt_mult
from padic_lab.experiments import ExperimentConfig, run

E = field_create(3, [-3, 0, 1], "Eisenstein")
M = FormalModule(E, M=20, N=15)

law = lt_group_law(M)
print("F(X, Y) = X + Y + ...; first nonzero mixed terms:")
mixed = [(k, c) for k, c in sorted(law.terms.items(), key=lambda kc: sum(kc[0])) if min(k) > 0 and not c.is_zero()]
for (i, j), c in mixed[:6]:
    print(f"   X^{i} Y^{j}: {c}")

m2 = lt_mult(M, 2)
print("\n[2](X) leading terms:", [str(c) for c in m2.coeffs[:5]])
print("log_LT(X) leading terms:", [str(c) for c in lt_log(M).coeffs[:5]])
print("exp_LT(X) leading terms:", [str(c) for c in lt_exp(M).coeffs[:5]])

rep = run(ExperimentConfig(name="lt-check", field="eisenstein:t^2-3", M=20, N=15, samples=5, seed=1))
print("\nlt-check over the same field:", rep.status)
for k, v in rep.summary.items():
    print(f"   {k}: {v}")
