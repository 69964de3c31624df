"""Coprimality of two germs, read off the ranks of Macaulay-like matrices.

We start from a pair with the common factor x + y, print the matrix of the
cofactor map at d = 2, then scan a coprime pair until its rank jumps above the
bound allowed for a common factor.
"""

from germcalc import Series, build_system, decide_coprime, milnor_dim_estimate, system_rank
from germcalc.coprimality import rank_bound

x, y = Series.variables(2, 8)

f1 = (x - 1) * (x + y) ** 2
f2 = (1 - 3 * y) * (x + y)
system = build_system([f1, f2], 2)
print("matrix of the cofactor map at d = 2, shape", system.shape)
for row in system.entries:
    print("  " + " ".join(f"{int(c):3d}" for c in row))
print("rank", system_rank(system), "bound", rank_bound(2, 2))

verdict = decide_coprime([f1, f2], 4)
print("\ncommon factor x + y:", verdict.status)

# a coprime pair: the certificate appears at d = mu - 1
g1, g2 = x ** 3 + y ** 2, x * y
mu = milnor_dim_estimate([g1, g2], 8)
verdict = decide_coprime([g1, g2], 7)
print("\n(x^3 + y^2, xy): quotient dimension", mu.dimension, "stabilised", mu.stabilized)
for r in verdict.ranks:
    mark = "  <- exceeds the bound" if r.rank > r.bound else ""
    print(f"  d={r.d}  rank={r.rank:3d}  bound={r.bound:3d}{mark}")
print("verdict:", verdict.status, "at d =", verdict.witness_d)
