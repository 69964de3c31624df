"""Compositional inversion, the inversion map and the factorial norms.

The inverse of z e^z is the Lambert series sum (-n)^(n-1) z^n / n!, which we
recover exactly.  Then the derivative constant D_{k, alpha, beta} is computed
and shown to be attained by a single monomial.
"""

from fractions import Fraction

from germcalc import Series, comp_inverse, deriv_constant, diffeo_from, exp_series, h_map, inversion_map
from germcalc.norms import check_derivative_bound

N = 8
(z,) = Series.variables(1, N)

inv = comp_inverse(z * exp_series(z))
print("inverse of z exp(z):", inv.series)

g = z - z.scale(Fraction(1, 2)) ** 2
g = g.jet(N - 1)
print("\ng =", g)
print("(z exp g)^-1 =", inversion_map(g).series)
print("h(g) =", h_map(g))
print("z exp(h(g)) agrees:", diffeo_from(h_map(g)) == inversion_map(g))

for k, alpha, beta in ((1, 1, 0.5), (2, 1, 0.5), (3, 2, 1)):
    D = deriv_constant(k, alpha, beta)
    n = D.argmax + k
    w = check_derivative_bound(Series.monomial((n,), 1, n + 1), k, alpha, beta)
    print(f"\nD(k={k}, alpha={alpha}, beta={beta}) = {D.value:.6g} at rank {D.argmax}")
    print(f"  z^{n}: lhs {float(w.lhs):.6g}, rhs {float(w.rhs):.6g}")
