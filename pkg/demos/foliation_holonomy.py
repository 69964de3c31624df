"""Holonomy of a quadratic foliation after one blow-up.

P = 6x^2 - 11xy + 6y^2 and Q = y^2 give the tangent cubic
-(u-1)(u-2)(u-3) on the exceptional divisor.  Cubic terms are added so the
holonomy is not linear.  We list the singular points, transport leaves around
each of them, check that the loop around all three is trivial, and finish with
the solvability relation on the linear model.
"""

from fractions import Fraction

from germcalc import (FoliationPair, Series, generator_loops, holonomy, holonomy_jet, product_loop,
                      singular_data, solvability_report, tangent_cubic)

x, y = Series.variables(2, 6)
P = 6 * x * x - 11 * x * y + 6 * y * y + x ** 3 - 2 * x * y * y + Fraction(1, 2) * y ** 3
Q = y * y + x * x * y - Fraction(1, 3) * x ** 3
f = FoliationPair(P, Q)
print("tangent cubic coefficients:", [str(c) for c in tangent_cubic(f)])

points = singular_data(f)
loops = generator_loops(points)
print("base point of the loops:", loops[0].base)
for pt, loop in zip(points, loops):
    h = holonomy(f, loop)
    jet = holonomy_jet(f, loop, 4)
    print(f"\nu = {pt.u.real:.6g}: lambda_x/lambda_u = {pt.ratio.real:.6g}")
    print(f"  expected multiplier {pt.multiplier:.6g}")
    print(f"  fitted multiplier   {h.multiplier:.6g} (radius {h.radius:.2g})")
    print("  jet:", " ".join(f"{complex(c):.4g}" for c in jet.coefficients()[1:]))

total = holonomy(f, product_loop(loops))
print("\nloop around all three points, max |h(x) - x|:", f"{total.max_displacement():.2e}")

linear = FoliationPair(6 * x * x - 11 * x * y + 6 * y * y, y * y)
report = solvability_report(linear, 8)
print("\nsolvability relation on the linear model:", report.verdict)
