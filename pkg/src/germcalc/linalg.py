"""Fraction-free exact elimination.

Rows of rationals (or Gaussian rationals) are first cleared of denominators,
then reduced with Bareiss' one-step scheme, where every division is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .series import GaussianRational


def _denominators(x):
    if isinstance(x, GaussianRational):
        return (x.re.denominator, x.im.denominator)
    if isinstance(x, Fraction):
        return (x.denominator,)
    if isinstance(x, int):
        return (1,)
    raise TypeError(f"exact elimination needs rational entries, got {type(x).__name__}")


def _integral_rows(rows):
    """Scale each row by the lcm of its denominators."""
    if all(type(x) is int for row in rows for x in row):
        return [list(r) for r in rows], False
    gaussian = False
    out = []
    for row in rows:
        l = 1
        for x in row:
            for d in _denominators(x):
                l = l * d // math.gcd(l, d)
        new = []
        for x in row:
            if isinstance(x, GaussianRational):
                if x.im != 0:
                    gaussian = True
                new.append(x * l)
            elif type(x) is int:
                new.append(x * l)
            else:
                new.append(x.numerator * (l // x.denominator))
        out.append(new)
    if gaussian:
        return [[x if isinstance(x, GaussianRational) else GaussianRational(x) for x in r] for r in out], True
    return [[int(x.re) if isinstance(x, GaussianRational) else x for x in r] for r in out], False


def bareiss_echelon(rows) -> tuple[list[list], list[int]]:
    """Row echelon form by fraction-free elimination.

    The pivot in each column is the first row (from the top) with a nonzero
    entry.  Returns the reduced integer (or Gaussian integer) rows and the list
    of pivot columns.
    """
    if not rows:
        return [], []
    M, gaussian = _integral_rows([list(r) for r in rows])
    nrows, ncols = len(M), len(M[0])
    div = lambda a, b: a / b if gaussian else a // b
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            Mi = M[i]
            Mr = M[r]
            if a == 0:
                for j in range(c + 1, ncols):
                    if Mi[j] != 0:
                        Mi[j] = div(piv * Mi[j], prev)
                continue
            for j in range(c + 1, ncols):
                Mi[j] = div(piv * Mi[j] - a * Mr[j], prev)
            Mi[c] = 0
        # rows above the pivot row are untouched
        prev = piv
        pivots.append(c)
        r += 1
    return M, pivots


def exact_rank(rows) -> int:
    """Rank over the fraction field of an exact matrix given as a list of rows."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return len(bareiss_echelon(rows)[1])


def determinant(rows):
    """Exact determinant of a square matrix (Fraction or Gaussian rational)."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    M = [[x if isinstance(x, GaussianRational) else Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        piv = M[c][c]
        det = det * piv
        for i in range(c + 1, n):
            f = M[i][c] / piv
            if f != 0:
                for j in range(c, n):
                    M[i][j] = M[i][j] - f * M[c][j]
    return det
