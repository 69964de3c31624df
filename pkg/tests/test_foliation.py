import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from generators import designed_foliation
from germcalc.errors import DomainError
from germcalc.foliation import (FoliationPair, LoopSpec, blowup_chart_x, blowup_polynomials, discriminant,
                                generator_loops, holonomy, holonomy_jet, linear_growth, product_loop,
                                rnd_star_test, singular_data, solvability_report, tangent_cubic)
from germcalc.series import Series

x, y = Series.variables(2, 6)


def test_tangent_cubic_of_designed_example():
    f = designed_foliation()
    assert tangent_cubic(f) == (-1, 6, -11, 6)
    assert discriminant(f) == 4


def test_discriminant_matches_sympy():
    f = FoliationPair(3 * x * x - x * y + 2 * y * y, Fraction(1, 2) * x * x + x * y - 5 * y * y)
    u = sympy.symbols("u")
    phi = sum(sympy.Rational(c) * u ** (3 - i) for i, c in enumerate(tangent_cubic(f)))
    assert sympy.discriminant(phi, u) == discriminant(f)


def test_blowup_restricts_to_the_cubic_on_the_divisor():
    f = designed_foliation()
    X = blowup_chart_x(f)
    assert X.trunc == 4
    on_divisor = X[1].substitute_zero([0])
    a3, a2, a1, a0 = tangent_cubic(f)
    assert on_divisor == Series(1, 4, {3: a3, 2: a2, 1: a1, 0: a0})
    # the divisor x = 0 is invariant and d(A)/dx there is lambda_x(u)
    assert X[0].substitute_zero([0]).is_zero()
    assert X[0].derive(0).substitute_zero([0]) == Series(1, 3, {2: 1})


def test_blowup_polynomials_are_complete():
    f = designed_foliation()
    A, B = blowup_polynomials(f)
    for xv, uv in ((0.3, 0.7), (-0.2 + 0.1j, 1.5)):
        P = f.P.evaluate([xv, xv * uv])
        Q = f.Q.evaluate([xv, xv * uv])
        assert cmath.isclose(A.evaluate([xv, uv]), Q / xv)
        assert cmath.isclose(B.evaluate([xv, uv]), (P - uv * Q) / xv ** 2)


def test_singular_points_and_eigenvalues():
    pts = singular_data(designed_foliation())
    assert [round(p.u.real, 12) for p in pts] == [1, 2, 3]
    assert [round(p.lambda_x.real, 9) for p in pts] == [1, 4, 9]
    assert [round(p.lambda_u.real, 9) for p in pts] == [-2, 1, -2]
    assert abs(pts[1].multiplier - 1) < 1e-12


def test_rnd_star_violations():
    assert rnd_star_test(designed_foliation())
    no_q02 = rnd_star_test(FoliationPair(6 * x * x - 11 * x * y + 6 * y * y, x * x + x * y))
    assert any("Q02" in v for v in no_q02.violations)
    # phi = -(u-1)^2 (u-2) has a repeated root
    repeated = FoliationPair(2 * x * x - 5 * x * y + 4 * y * y, y * y)
    assert any("discriminant" in v for v in rnd_star_test(repeated).violations)
    with pytest.raises(DomainError):
        singular_data(repeated)


def test_pairs_must_be_coprime_with_zero_linear_part():
    with pytest.raises(DomainError):
        FoliationPair(x * (x + y), x * y)
    with pytest.raises(DomainError):
        FoliationPair(x + y * y, y * y)


def test_loop_geometry():
    loop = LoopSpec.circle(2, 0.5)
    assert loop.winding_number(2) == 1 and loop.winding_number(0) == 0
    assert loop.reversed().winding_number(2) == -1
    lolly = LoopSpec.lollipop(0, 2, 0.5)
    assert lolly.base == 0 and lolly.winding_number(2) == 1
    assert math.isclose(lolly.distance_to(3), 0.5, rel_tol=1e-2)
    with pytest.raises(ValueError):
        LoopSpec.lollipop(2.2, 2, 0.5)


def test_generator_loops_each_encircle_one_point():
    pts = singular_data(designed_foliation())
    loops = generator_loops(pts)
    for j, loop in enumerate(loops):
        assert [loop.winding_number(p.u) for p in pts] == [int(i == j) for i in range(3)]
    total = product_loop(loops)
    assert all(total.winding_number(p.u) == 1 for p in pts)


def test_linear_growth_of_a_circle_is_one_without_residues():
    pts = singular_data(designed_foliation())
    far = LoopSpec.circle(2 + 5j, 0.5)
    assert linear_growth(far, pts) < 1.5


@pytest.mark.slow
def test_holonomy_linear_parts_match_the_eigenvalues():
    f = designed_foliation()
    pts = singular_data(f)
    for pt, loop in zip(pts, generator_loops(pts)):
        h = holonomy(f, loop)
        assert not h.low_confidence
        assert abs(h.multiplier - pt.multiplier) < 1e-6
        jet = holonomy_jet(f, loop, 6)
        assert abs(complex(jet.multiplier) - pt.multiplier) < 1e-8
        # the fit and the transported jet agree on the first coefficients
        assert abs(complex(jet.coefficients()[2]) - complex(h.fitted.coefficients()[2])) < 1e-3 * max(
            1.0, abs(complex(jet.coefficients()[2])))


@pytest.mark.slow
def test_holonomy_is_invariant_under_loop_refinement():
    f = designed_foliation()
    pts = singular_data(f)
    loop = generator_loops(pts)[0]
    a = holonomy_jet(f, loop, 5)
    b = holonomy_jet(f, loop.refined(2), 5)
    assert np.allclose([complex(c) for c in a.coefficients()], [complex(c) for c in b.coefficients()],
                       rtol=1e-7, atol=1e-9)


@pytest.mark.slow
def test_generic_foliation_fails_the_solvability_relation():
    f = FoliationPair(x * x - 3 * x * y + Fraction(1, 2) * y * y + x ** 3 + y ** 3 - x * y * y,
                      2 * y * y + x * y - x * x + x * x * y - 2 * y ** 3)
    report = solvability_report(f, 8)
    assert report.verdict == "fail" and report.failing_degree is not None
    k = report.failing_degree
    assert abs(report.defect[k]) > 10 * report.uncertainty[k]


def test_linear_model_passes_the_solvability_relation():
    report = solvability_report(designed_foliation(perturbed=False), 8)
    assert report.passes
