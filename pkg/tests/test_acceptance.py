"""Acceptance suite: one function per criterion, each timed against its budget.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import cmath
import math
import sys
import time
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import numpy as np
import pytest
import sympy

sys.path.insert(0, str(Path(__file__).parent))

from generators import (designed_foliation, diffeo_series, make_rng, polynomial, rational,  # noqa: E402
                        sparse_series)

from germcalc.calculus import (DiffeoGerm, comp_inverse, diffeo_from, frechet_dir, h_map,  # noqa: E402
                               inversion_map, log_map, solvable2_test)
from germcalc.coprimality import (build_index_matrix, build_system, decide_coprime,  # noqa: E402
                                  milnor_dim_estimate, system_rank)
from germcalc.flows import (OdeSpec, VectorField, flow_group_defect, flow_residual,  # noqa: E402
                            flow_series, ode_solve)
from germcalc.foliation import (FoliationPair, LoopSpec, generator_loops, holonomy,  # noqa: E402
                                product_loop, singular_data, solvability_report)
from germcalc.norms import check_derivative_bound, check_product_bound, deriv_constant  # noqa: E402
from germcalc.series import Series, exp_series, monomials, valuation  # noqa: E402

RESULTS = {}

TABLE_2 = [
    [0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 1, 0],
    [0, -1, 0, -1, 0, 0, -2, 3, -1, 0, 2, 0],
    [0, 0, 0, -1, 0, -1, -1, 3, -2, 3, 1, 0],
    [0, 0, 0, 0, 0, -1, 0, 0, -1, 3, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 0, 0, -1, 0, -1, -2, 3],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, 3],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1],
]

# Table 1 as printed: for each row q, the cells (column, q - p) that are shown
TABLE_1_ROWS = [
    {0: (1, 0, 0), 6: (2, 0, 0), 9: (3, 0, 0)},
    {0: (0, 1, 0), 1: (1, 0, 0), 6: (1, 1, 0), 7: (2, 0, 0), 9: (2, 1, 0)},
    {0: (0, 0, 1), 2: (1, 0, 0), 6: (1, 0, 1), 8: (2, 0, 0), 9: (2, 0, 1)},
    {1: (0, 1, 0), 3: (1, 0, 0), 6: (0, 2, 0), 7: (1, 1, 0), 9: (1, 2, 0)},
    {1: (0, 0, 1), 2: (0, 1, 0), 4: (1, 0, 0), 6: (0, 1, 1), 7: (1, 0, 1), 8: (1, 1, 0), 9: (1, 1, 1)},
    {2: (0, 0, 1), 5: (1, 0, 0), 6: (0, 0, 2), 8: (1, 0, 1), 9: (1, 0, 2)},
    {3: (0, 1, 0), 7: (0, 2, 0), 9: (0, 3, 0)},
    {3: (0, 0, 1), 4: (0, 1, 0), 7: (0, 1, 1), 8: (0, 2, 0), 9: (0, 2, 1)},
    {4: (0, 0, 1), 5: (0, 1, 0), 7: (0, 0, 2), 8: (0, 1, 1), 9: (0, 1, 2)},
    {5: (0, 0, 1), 8: (0, 0, 2), 9: (0, 0, 3)},
    {6: (1, 0, 0), 9: (2, 0, 0)},
    {6: (0, 1, 0), 7: (1, 0, 0), 9: (1, 1, 0)},
    {6: (0, 0, 1), 8: (1, 0, 0), 9: (1, 0, 1)},
    {7: (0, 1, 0), 9: (0, 2, 0)},
    {7: (0, 0, 1), 8: (0, 1, 0), 9: (0, 1, 1)},
    {8: (0, 0, 1), 9: (0, 0, 2)},
    {9: (1, 0, 0)},
    {9: (0, 1, 0)},
    {9: (0, 0, 1)},
]


def record(n, ok, elapsed, budget, detail=""):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {n:2d}: {status}  ({elapsed:.2f} s, budget {budget} s){'  ' + detail if detail else ''}"
    RESULTS[n] = line
    return ok and within, line


# ---------------------------------------------------------------------------
# 1. Table 2


def criterion_1():
    t0 = time.perf_counter()
    x, y = Series.variables(2, 3)
    f1 = (x - 1) * (x + y) ** 2
    f2 = (1 - 3 * y) * (x + y)
    system = build_system([f1, f2], 2)
    entries = [[int(c) if c == int(c) else c for c in row] for row in system.entries]
    rank = system_rank(system)
    nu = valuation(f2)
    ok = system.shape == (9, 12) and entries == TABLE_2 and rank == 6 and nu == 1
    detail = f"shape {system.shape}, rank {rank}, valuation {nu}"
    return record(1, ok, time.perf_counter() - t0, 1, detail)


# ---------------------------------------------------------------------------
# 2. Table 1


def criterion_2():
    t0 = time.perf_counter()
    sk = build_index_matrix(3, 2)
    ok = sk.shape == (19, 10)
    for i, cells in enumerate(TABLE_1_ROWS):
        for j in range(10):
            expected = cells.get(j, (0, 0, 0))
            ok = ok and sk.entries[i][j] == expected
    # block triangular: |q| < |p| gives a null cell; blocks by |p| and |q|
    for i, q in enumerate(sk.rows):
        for j, p in enumerate(sk.cols):
            if sum(q) < sum(p) or any(a < b for a, b in zip(q, p)):
                ok = ok and sk.is_null(i, j)
    # M_1 is the trailing sub-matrix of M_2
    small = build_index_matrix(3, 1)
    r0 = len(sk.rows) - len(small.rows)
    c0 = len(sk.cols) - len(small.cols)
    ok = ok and sk.rows[r0:] == small.rows and sk.cols[c0:] == small.cols
    ok = ok and all(sk.entries[r0 + i][c0:] == small.entries[i] for i in range(len(small.rows)))
    return record(2, ok, time.perf_counter() - t0, 1, f"shape {sk.shape}")


# ---------------------------------------------------------------------------
# 3. coprimality against the gcd oracle

C3_DMAX = 10


def _to_sympy(f, X, Y):
    return sum(sympy.Rational(v.numerator, v.denominator) * X ** k[0] * Y ** k[1] for k, v in f.items())


def coprimality_cases(seed=1, count=200):
    """Pairs of polynomials of degree at most 5; every other one has a planted factor in the maximal ideal."""
    rng = make_rng(seed)
    trunc = C3_DMAX + 1
    cases = []
    while len(cases) < count:
        if len(cases) % 2:
            g = polynomial(rng, rng.randint(1, 2), trunc)
            if g.is_zero():
                continue
            room = 5 - g.degree()
            f1 = g * polynomial(rng, room, trunc, constant=True)
            f2 = g * polynomial(rng, room, trunc, constant=True)
        else:
            f1 = polynomial(rng, rng.randint(1, 5), trunc)
            f2 = polynomial(rng, rng.randint(1, 5), trunc)
        if f1.is_zero() or f2.is_zero():
            continue
        cases.append((f1, f2))
    return cases


def coprimality_misses(cases):
    X, Y = sympy.symbols("x y")
    misses = []
    for f1, f2 in cases:
        gcd = sympy.gcd(_to_sympy(f1, X, Y), _to_sympy(f2, X, Y))
        composite = gcd.subs({X: 0, Y: 0}) == 0
        verdict = decide_coprime([f1, f2], C3_DMAX)
        if verdict.coprime == composite:
            misses.append((f1, f2, verdict))
    return misses


def criterion_3():
    t0 = time.perf_counter()
    cases = coprimality_cases()
    misses = coprimality_misses(cases)
    agree = len(cases) - len(misses)
    return record(3, not misses, time.perf_counter() - t0, 60, f"agreement {agree}/{len(cases)}"), misses


# ---------------------------------------------------------------------------
# 4. norm inequalities


def criterion_4():
    t0 = time.perf_counter()
    rng = make_rng(4)
    ok = True
    for _ in range(100):
        m = rng.choice((1, 2))
        f = sparse_series(rng, m, 12, 0.3, lo=0)
        g = sparse_series(rng, m, 12, 0.3, lo=0)
        w = check_product_bound(f, g, 1)
        ok = ok and w.holds and w.exact
        u = sparse_series(rng, 1, 12, 0.4, lo=0)
        k = rng.randint(1, 3)
        ok = ok and check_derivative_bound(u, k, 1, Fraction(1, 2)).holds
    # equality on the extremal monomial
    for k, alpha, beta in ((1, 1, 0.5), (2, 1, 0.5), (3, 2, 1), (2, 0.5, 0.25)):
        D = deriv_constant(k, alpha, beta)
        n = D.argmax + k
        w = check_derivative_bound(Series.monomial((n,), 1, n + 2), k, alpha, beta)
        ok = ok and math.isclose(float(w.lhs), float(w.rhs), rel_tol=1e-9)
    return record(4, ok, time.perf_counter() - t0, 30)


# ---------------------------------------------------------------------------
# 5. flows


def random_field(rng, m, order):
    return VectorField([sparse_series(rng, m, order, 0.35, lo=-3, hi=3) for _ in range(m)])


def criterion_5():
    t0 = time.perf_counter()
    N = 8
    (z,) = Series.variables(1, N)
    z_, t = Series.variables(2, N)
    euler = flow_series(VectorField([z]), N)[0]
    expected = Series(2, N, {(1, k): Fraction(1, factorial(k)) for k in range(N)})
    ok = euler == expected
    quad = flow_series(VectorField([z * z]), N)[0]
    # z / (1 - t z) = sum z^(k+1) t^k
    ok = ok and quad == Series(2, N, {(k + 1, k): 1 for k in range(N // 2)})
    rng = make_rng(5)
    for _ in range(50):
        m = rng.choice((1, 2))
        X = random_field(rng, m, 6)
        Phi = flow_series(X, 6)
        ok = ok and all(r.is_zero() for r in flow_residual(X, Phi))
        ok = ok and all(d.is_zero() for d in flow_group_defect(Phi))
    return record(5, ok, time.perf_counter() - t0, 60)


# ---------------------------------------------------------------------------
# 6. ODE constructor


def criterion_6():
    t0 = time.perf_counter()
    z, d0, d1 = Series.variables(3, 11)
    f = ode_solve(None, OdeSpec(1, d1 - d0 - z), 10)
    oracle = Series(1, 10, {(n,): Fraction(1, factorial(n)) for n in range(2, 11)})
    return record(6, f == oracle, time.perf_counter() - t0, 5)


# ---------------------------------------------------------------------------
# 7. calculus round trips


def criterion_7():
    t0 = time.perf_counter()
    rng = make_rng(7)
    N = 10
    ok = True
    for _ in range(50):
        d = DiffeoGerm(diffeo_series(rng, N))
        ok = ok and comp_inverse(comp_inverse(d)) == d
        g = sparse_series(rng, 1, N - 1, 0.5, start=1)
        ok = ok and diffeo_from(h_map(g)) == inversion_map(g)
        h = sparse_series(rng, 1, N, 0.5, start=1)
        ok = ok and exp_series(log_map(h)) == 1 + h
    z = Series.var(0, 1, N)
    lagrange = Series(1, N, {(n,): Fraction((-n) ** (n - 1), factorial(n)) for n in range(1, N + 1)})
    ok = ok and comp_inverse(z * exp_series(z)).series == lagrange
    return record(7, ok, time.perf_counter() - t0, 30)


# ---------------------------------------------------------------------------
# 8. directional derivatives


def criterion_8():
    t0 = time.perf_counter()
    rng = make_rng(8)
    N = 8
    ok = True
    for _ in range(30):
        g = sparse_series(rng, 1, N, 0.5, start=1)
        h = sparse_series(rng, 1, N, 0.5, start=1)
        f = sparse_series(rng, 1, N, 0.5)
        for op in ("compose", "diffeo", "inverse"):
            approx = frechet_dir(op, g.to_approx(), h.to_approx(), f=f.to_approx())
            ok = ok and not approx.exact and approx.agree(1e-8)
        for op in ("compose", "diffeo"):
            exact = frechet_dir(op, g, h, f=f)
            ok = ok and exact.exact and exact.agree()
    return record(8, ok, time.perf_counter() - t0, 30)


# ---------------------------------------------------------------------------
# 9. holonomy numerics


def homogeneous_foliations(seed=9, count=3):
    rng = make_rng(seed)
    x, y = Series.variables(2, 6)
    out = [designed_foliation(perturbed=False)]
    while len(out) < count:
        P = sum((rational(rng, -9, 9, 4) * x ** a * y ** (2 - a) for a in range(3)), Series.zero(2, 6))
        Q = sum((rational(rng, -9, 9, 4) * x ** a * y ** (2 - a) for a in range(3)), Series.zero(2, 6))
        try:
            out.append(FoliationPair(P, Q))
        except Exception:
            continue
    return out


def criterion_9():
    t0 = time.perf_counter()
    f = designed_foliation()
    points = singular_data(f)
    loops = generator_loops(points)
    base = loops[0].base
    # (a) a lollipop around a disc with no singular point inside
    trivial = LoopSpec.lollipop(base, base + 1.5j, 0.4)
    contractible = holonomy(f, trivial).max_displacement()
    # (b) the product of the three generators
    composite = holonomy(f, product_loop(loops)).max_displacement()
    ok = contractible < 1e-6 and composite < 1e-6
    # (c) linear models: the multiplier is exp(2 pi i lambda_x / lambda_u)
    worst = 0.0
    for g in homogeneous_foliations():
        pts = singular_data(g)
        for pt, loop in zip(pts, generator_loops(pts)):
            expected = cmath.exp(2j * math.pi * pt.lambda_x / pt.lambda_u)
            worst = max(worst, abs(holonomy(g, loop).multiplier - expected))
    ok = ok and worst < 1e-4
    detail = f"contractible {contractible:.1e}, product {composite:.1e}, multiplier error {worst:.1e}"
    return record(9, ok, time.perf_counter() - t0, 120, detail)


# ---------------------------------------------------------------------------
# 10. solvability gate


def criterion_10():
    t0 = time.perf_counter()
    N = 10
    (z,) = Series.variables(1, N)
    # time-1 and time-2 maps of z^2 d/dz, and two rational homotheties
    f = DiffeoGerm(z * (1 - z).reciprocal())
    g = DiffeoGerm(z * (1 - 2 * z).reciprocal())
    ok = solvable2_test(f, g, N).passes
    ok = ok and solvable2_test(DiffeoGerm(z.scale(2)), DiffeoGerm(z.scale(Fraction(1, 3))), N).passes
    # holonomy generators of the linear designed foliation commute
    report = solvability_report(designed_foliation(perturbed=False), N)
    ok = ok and report.verdict == "pass"
    bad = solvable2_test(DiffeoGerm(z + z ** 2), DiffeoGerm(z + z ** 3), N)
    ok = ok and not bad.passes and bad.failing_degree is not None and bad.defect.is_exact
    detail = f"perturbed pair fails at degree {bad.failing_degree}"
    return record(10, ok, time.perf_counter() - t0, 10, detail)


# ---------------------------------------------------------------------------
# pytest entry points


def test_criterion_1_table_2():
    ok, line = criterion_1()
    assert ok, line


def test_criterion_2_table_1():
    ok, line = criterion_2()
    assert ok, line


@pytest.mark.slow
def test_criterion_3_gcd_oracle():
    (ok, line), _ = criterion_3()
    assert ok, line


def test_scan_depth_is_bounded_by_the_milnor_number():
    """A coprime pair of degree <= 5 whose certificate needs d = 11, beyond d_max = 10.

    Agreement with the gcd oracle at a fixed d_max is a property of the sample,
    not of the method: for m = 2 the first certifying rank is mu - 1.
    """
    x, y = Series.variables(2, 12)
    f1 = (-5 * x ** 4 + x ** 3 * y ** 2 - 4 * x ** 3 + Fraction(3, 2) * x ** 2 - Fraction(4, 3) * x * y
          - Fraction(4, 3) * x + Fraction(5, 2) * y ** 5 - Fraction(1, 3) * y ** 4)
    f2 = -5 * x ** 3
    assert milnor_dim_estimate([f1, f2], 12).dimension == 12
    assert decide_coprime([f1, f2], C3_DMAX).status == "composite-consistent"
    verdict = decide_coprime([f1, f2], 11)
    assert verdict.coprime and verdict.witness_d == 11


def test_criterion_4_norm_inequalities():
    ok, line = criterion_4()
    assert ok, line


def test_criterion_5_flows():
    ok, line = criterion_5()
    assert ok, line


def test_criterion_6_ode():
    ok, line = criterion_6()
    assert ok, line


def test_criterion_7_round_trips():
    ok, line = criterion_7()
    assert ok, line


def test_criterion_8_frechet():
    ok, line = criterion_8()
    assert ok, line


@pytest.mark.slow
def test_criterion_9_holonomy():
    ok, line = criterion_9()
    assert ok, line


def test_criterion_10_solvability():
    ok, line = criterion_10()
    assert ok, line


if __name__ == "__main__":
    runs = [criterion_1, criterion_2, lambda: criterion_3()[0], criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]
    failed = 0
    for run in runs:
        ok, line = run()
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
