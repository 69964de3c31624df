import math
from fractions import Fraction

import pytest

from generators import make_rng, sparse_series
from germcalc.errors import InconclusiveError, InvalidWeightError
from germcalc.norms import (WeightSequence, a_norm, amplitude, check_composition_bound, check_derivative_bound,
                            check_product_bound, comparison, deriv_constant, exact_deriv_term,
                            naive_polydisc_radius, radius_bounds)
from germcalc.series import Series, exp_series

(z,) = Series.variables(1, 12)


def test_factorial_norm_is_exact_for_integer_alpha():
    a = WeightSequence.factorial(1)
    report = a_norm(z + 3 * z ** 2 - z ** 3, a)
    assert report.value == 1 + Fraction(3, 2) + Fraction(1, 6)
    assert report.is_lower_bound


def test_multi_index_weights_are_products():
    x, y = Series.variables(2, 4)
    a = WeightSequence.factorial(1)
    assert a_norm(x * x * y, a).value == Fraction(1, 2)


def test_invalid_weights_are_rejected():
    with pytest.raises(InvalidWeightError):
        WeightSequence.factorial(0)
    with pytest.raises(InvalidWeightError):
        WeightSequence([1, 0, 1])


def test_exponential_has_comparison_value():
    # ||exp(z)||_{a(1)} partial sum is sum 1/n!^2
    a = WeightSequence.factorial(1)
    expected = sum(Fraction(1, math.factorial(n) ** 2) for n in range(13))
    assert a_norm(exp_series(z), a).value == expected
    assert comparison(a, Fraction(1), 12) == sum(Fraction(1, math.factorial(n)) for n in range(13))


def test_amplitude_of_factorial_weights():
    a = WeightSequence.factorial(1)
    amp = amplitude(a, 3.5)
    brute = max(range(40), key=lambda n: 3.5 ** n / math.factorial(n))
    assert amp.argmax == brute
    assert math.isclose(amp.value, 3.5 ** brute / math.factorial(brute))


def test_amplitude_of_a_short_table_is_inconclusive():
    with pytest.raises(InconclusiveError):
        amplitude(WeightSequence([1, 1, 1]), 2.0)


def test_radius_of_geometric_series():
    r = radius_bounds((1 - z.scale(Fraction(1, 2))).reciprocal())
    assert math.isclose(r.lower, 2.0) and math.isclose(r.upper, 2.0)
    assert not r.certified
    assert radius_bounds(z + z * z).unbounded


def test_deriv_constant_matches_brute_force():
    for k, alpha, beta in ((1, 1, 0.5), (2, 1, 0.5), (3, 2, 1)):
        D = deriv_constant(k, alpha, beta)
        terms = [(beta + 1) * math.lgamma(n + k + 1) - (alpha + 1) * math.lgamma(n + 1) for n in range(200)]
        assert D.argmax == max(range(200), key=lambda n: (terms[n], -n))
        assert math.isclose(D.log_value, terms[D.argmax])


def test_deriv_constant_integer_case_is_exact():
    D = deriv_constant(3, 2, 1)
    assert math.isclose(D.value, float(exact_deriv_term(D.argmax, 3, 2, 1)))


def test_deriv_constant_needs_alpha_above_beta():
    with pytest.raises(ValueError):
        deriv_constant(1, 0.5, 0.5)


def test_derivative_bound_counts_the_degree_k_coefficient():
    # d^2/dz^2 z^2 = 2, so the degree-2 term must stay on the right-hand side
    w = check_derivative_bound(z * z, 2, 1, 0.5)
    assert w.holds and float(w.rhs) > 0


def test_product_and_composition_bounds():
    rng = make_rng(11)
    for _ in range(30):
        f = sparse_series(rng, 1, 10, 0.4, lo=0)
        g = sparse_series(rng, 1, 10, 0.4, lo=0, start=1)
        assert check_product_bound(f, g, 1).holds
        assert check_composition_bound(f, g, 1, 0.5).holds


def test_naive_polydisc_radius():
    a = WeightSequence.factorial(1)
    r = naive_polydisc_radius(a, lambda n: float(math.factorial(n)), 10)
    assert math.isclose(r, 1.0)
    with pytest.raises(InvalidWeightError):
        naive_polydisc_radius(a, [0.0] * 11, 10)
