"""Seeded random inputs shared by the test modules."""

import random
from fractions import Fraction

from germcalc.foliation import FoliationPair
from germcalc.series import Series, monomials


def rational(rng, lo=-5, hi=5, den=3, nonzero=False):
    while True:
        q = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if q or not nonzero:
            return q


def sparse_series(rng, nvars, trunc, density=0.4, lo=-5, hi=5, start=0, max_degree=None):
    top = trunc if max_degree is None else max_degree
    coeffs = {}
    for n in monomials(nvars, top):
        if sum(n) >= start and rng.random() < density:
            c = rational(rng, lo, hi)
            if c:
                coeffs[n] = c
    return Series(nvars, trunc, coeffs)


def polynomial(rng, max_degree, trunc, density=0.5, constant=False):
    """A polynomial in ``x, y`` with about ``density`` of its monomials present."""
    coeffs = {}
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            if (a, b) == (0, 0) and not constant:
                continue
            if rng.random() < density:
                c = rational(rng)
                if c:
                    coeffs[(a, b)] = c
    return Series(2, trunc, coeffs)


def diffeo_series(rng, trunc, density=0.6):
    """``a z + ...`` with ``a`` a nonzero rational."""
    s = sparse_series(rng, 1, trunc, density, start=2)
    return s + Series.monomial((1,), 1, trunc, rational(rng, nonzero=True))


def make_rng(seed):
    return random.Random(seed)


def designed_foliation(perturbed=True):
    """Tangent cubic ``(u-1)(u-2)(u-3)``, optionally with cubic terms added."""
    x, y = Series.variables(2, 6)
    P = 6 * x * x - 11 * x * y + 6 * y * y
    Q = y * y
    if perturbed:
        P = P + x ** 3 - 2 * x * y * y + Fraction(1, 2) * y ** 3
        Q = Q + x * x * y - Fraction(1, 3) * x ** 3
    return FoliationPair(P, Q)
