"""Deciding coprimality of power series with Macaulay-like matrices.

For ``f = (f_1, ..., f_k)`` vanishing at the origin and a rank parameter ``d``
consider the linear map

    phi_d : (h_1, ..., h_k) -> ( J_{d+1}(f_p h_p - f_q h_q) )_{p < q}

on cofactors of degree at most ``d``.  If the family has a common non-unit
factor ``g`` then every difference is ``J_{d+1}(g q)`` with ``deg q <= d``, so
``rank phi_d <= (k-1) * binom(m+d, d)`` for every ``d``.  A single ``d`` where
the rank exceeds that bound therefore certifies coprimality.  For ``k = 2``
the converse holds as well; for ``k > 2`` it does not (``(x^2, y^2, xy)`` has
the same ranks as ``(x+y) * (x, y, x-y)``), so the scan is one-sided there.

Matrices are laid out with rows indexed by output monomials ``q`` and columns
by cofactor monomials ``p`` (one column per family member), both listed in
decreasing lexicomogeneous order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import DimensionError, DomainError, TruncationError
from .linalg import exact_rank
from .series import Series, Unbounded, monomials


def _desc_monomials(m: int, d: int, skip_zero: bool = False) -> list[tuple]:
    mons = monomials(m, d)[::-1]
    if skip_zero:
        mons = [q for q in mons if sum(q) > 0]
    return mons


def _difference(q: tuple, p: tuple):
    n = tuple(a - b for a, b in zip(q, p))
    return n if all(x >= 0 for x in n) else None


@dataclass(frozen=True)
class IndexSkeleton:
    """The matrix of multi-indexes ``n_{p,q}``.

    ``entries[i][j]`` is ``q_i - p_j`` when that is a multi-index and the zero
    multi-index otherwise (the null cells of the printed tables).
    """

    m: int
    d: int
    rows: list
    cols: list
    entries: list

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def is_null(self, i: int, j: int) -> bool:
        return not any(self.entries[i][j])

    def submatrix(self, row_keys, col_keys) -> list:
        ri = [self.rows.index(q) for q in row_keys]
        ci = [self.cols.index(p) for p in col_keys]
        return [[self.entries[i][j] for j in ci] for i in ri]


def build_index_matrix(m: int, d: int) -> IndexSkeleton:
    if m < 1:
        raise DimensionError("need at least one variable")
    rows = _desc_monomials(m, d + 1, skip_zero=True)
    cols = _desc_monomials(m, d)
    zero = (0,) * m
    entries = [[_difference(q, p) or zero for p in cols] for q in rows]
    return IndexSkeleton(m, d, rows, cols, entries)


@dataclass(frozen=True)
class MacaulaySystem:
    """Exact matrix of ``phi_d`` for a family of ``k`` series in ``m`` variables.

    ``rows`` lists ``(pair, q)``: the pair ``(a, b)`` of family indexes whose
    difference ``f_a h_a - f_b h_b`` is read at monomial ``q``.  ``cols`` lists
    ``(p, l)``: cofactor monomial ``p`` of ``h_l``.
    """

    m: int
    d: int
    k: int
    rows: list
    cols: list
    entries: list

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def matrix(self) -> list[list]:
        return [list(r) for r in self.entries]


def _check_family(fs: Sequence[Series]):
    if len(fs) < 2:
        raise ValueError("a family needs at least two members")
    m = fs[0].nvars
    if any(f.nvars != m for f in fs):
        raise DimensionError("family members must share their variables")
    return m


def build_system(fs: Sequence[Series], d: int, layout: str = "pairs") -> MacaulaySystem:
    """Matrix of ``phi_d``; for ``k = 2`` the column pair of ``p`` carries ``(+f_1, -f_2)``.

    For ``k > 2`` every pair ``a < b`` contributes a row block, with ``+f_a`` in
    the columns of ``h_a`` and ``-f_b`` in those of ``h_b``.  ``layout="chain"``
    keeps only the pairs ``(1, b)``, which span the same row space.
    """
    if layout not in ("pairs", "chain"):
        raise ValueError(f"unknown layout {layout!r}")
    m = _check_family(fs)
    for f in fs:
        if f.constant_term() != 0:
            raise DomainError("family members must vanish at the origin")
        if f.trunc < d + 1:
            raise TruncationError(f"rank parameter d={d} needs truncation >= {d + 1}, got {f.trunc}")
    k = len(fs)
    qs = _desc_monomials(m, d + 1, skip_zero=True)
    ps = _desc_monomials(m, d)
    cols = [(p, l) for p in ps for l in range(k)]
    coeffs = [f._c for f in fs]
    rows, entries = [], []
    pairs = list(combinations(range(k), 2))
    if layout == "chain":
        pairs = [(0, b) for b in range(1, k)]
    for a, b in pairs:
        for q in qs:
            row = []
            for p in ps:
                n = _difference(q, p)
                for l in range(k):
                    if n is None or l not in (a, b):
                        row.append(0)
                        continue
                    c = coeffs[l].get(n, 0)
                    row.append(c if l == a else -c)
            rows.append(((a, b), q))
            entries.append(row)
    return MacaulaySystem(m, d, k, rows, cols, entries)


def system_rank(system: MacaulaySystem) -> int:
    return exact_rank(system.entries)


def rank_bound(m: int, d: int, k: int = 2) -> int:
    """Largest rank of ``phi_d`` compatible with a common factor."""
    return (k - 1) * comb(m + d, d)


def composite_at_rank(fs: Sequence[Series], d: int) -> bool:
    """True when ``rank phi_d <= (k-1) binom(m+d, d)``."""
    system = build_system(fs, d)
    return system_rank(system) <= rank_bound(system.m, d, system.k)


@dataclass(frozen=True)
class RankRecord:
    d: int
    rank: int
    bound: int
    kernel: int


@dataclass(frozen=True)
class CoprimalityVerdict:
    """Result of scanning ``d = 0 .. d_max``.

    ``status`` is ``"coprime-certified"`` (at ``witness_d``),
    ``"composite-consistent"`` (the rank bound held at every scanned ``d``;
    truncated inputs can never certify a common factor) or
    ``"inputs-degenerate"`` (some member is a unit).
    """

    status: str
    witness_d: int | None
    ranks: list = field(default_factory=list)
    reason: str = ""

    @property
    def coprime(self) -> bool:
        return self.status == "coprime-certified"


def decide_coprime(fs: Sequence[Series], d_max: int | None = None) -> CoprimalityVerdict:
    """Scan ``d = 0 .. d_max`` for a rank exceeding the composite bound.

    ``d_max`` defaults to the largest value the truncations support,
    ``min trunc - 1``.
    """
    m = _check_family(fs)
    if d_max is None:
        d_max = min(f.trunc for f in fs) - 1
    units = [i for i, f in enumerate(fs) if f.constant_term() != 0]
    if units:
        return CoprimalityVerdict("inputs-degenerate", None, [],
                                  f"member {units[0]} does not vanish at the origin (it is a unit)")
    if any(f.trunc < d_max + 1 for f in fs):
        raise TruncationError(f"d_max={d_max} needs every truncation >= {d_max + 1}")
    records = []
    for d in range(d_max + 1):
        system = build_system(fs, d)
        r = system_rank(system)
        bound = rank_bound(m, d, len(fs))
        records.append(RankRecord(d, r, bound, len(system.cols) - r))
        if r > bound:
            return CoprimalityVerdict("coprime-certified", d, records)
    return CoprimalityVerdict("composite-consistent", None, records)


# ---------------------------------------------------------------------------
# polynomial side computations


def _to_sympy(f: Series, gens):
    import sympy

    expr = 0
    for k, v in f.items():
        c = sympy.Rational(v.numerator, v.denominator) if hasattr(v, "numerator") else \
            sympy.Rational(v.re.numerator, v.re.denominator) + sympy.I * sympy.Rational(v.im.numerator, v.im.denominator)
        mono = 1
        for g, e in zip(gens, k):
            mono *= g ** e
        expr += c * mono
    return sympy.Poly(expr, *gens, domain="QQ_I" if any(not hasattr(v, "numerator") for _, v in f.items()) else "QQ")


def _poly_valuation(p) -> int:
    return min(sum(mono) for mono in p.monoms()) if not p.is_zero else Unbounded(0)


def epsilon_bounds(fs: Sequence[Series]) -> list[int]:
    """Valuation bounds ``eps_l(f)`` on the cofactors of a composite family.

    ``eps_l = sum_{j != l} nu(f_j) - nu(prod f_j / (gcd^(k-1) lcm))``; the inputs
    are treated as polynomials (their stored coefficients).
    """
    import sympy

    m = _check_family(fs)
    if any(f.is_zero() for f in fs):
        raise DomainError("a zero member makes the valuation bounds degenerate")
    gens = sympy.symbols(f"x0:{m}")
    polys = [_to_sympy(f, gens) for f in fs]
    k = len(polys)
    g = polys[0]
    l = polys[0]
    for p in polys[1:]:
        g = sympy.gcd(g, p)
        l = sympy.lcm(l, p)
    prod = polys[0]
    for p in polys[1:]:
        prod = prod * p
    quotient, rem = sympy.div(prod, g ** (k - 1) * l)
    if not rem.is_zero:
        raise ArithmeticError("product is not divisible by gcd^(k-1) lcm")
    nus = [f.valuation() for f in fs]
    qnu = _poly_valuation(quotient)
    return [sum(nus[j] for j in range(k) if j != i) - qnu for i in range(k)]


@dataclass(frozen=True)
class MilnorEstimate:
    dimension: int
    order: int
    stabilized: bool
    previous: int | None


def _quotient_dim(fs: Sequence[Series], N: int, m: int) -> int:
    mons = monomials(m, N)
    index = {q: i for i, q in enumerate(mons)}
    rows = []
    for f in fs:
        fj = f.jet(N)
        for p in mons:
            dp = sum(p)
            row = [0] * len(mons)
            nonzero = False
            for n, c in fj._c.items():
                if sum(n) + dp <= N:
                    row[index[tuple(a + b for a, b in zip(n, p))]] = c
                    nonzero = True
            if nonzero:
                rows.append(row)
    return len(mons) - exact_rank(rows) if rows else len(mons)


def milnor_dim_estimate(fs: Sequence[Series], N: int) -> MilnorEstimate:
    """``dim Pol_{<=N} / J_N(sum f_l Pol_{<=N})``, with a stabilisation flag.

    The flag is set when orders ``N - 1`` and ``N`` give the same dimension.
    """
    m = _check_family(fs) if len(fs) > 1 else fs[0].nvars
    for f in fs:
        if f.constant_term() != 0:
            raise DomainError("family members must vanish at the origin")
        if f.trunc < N:
            raise TruncationError(f"order {N} needs truncation >= {N}, got {f.trunc}")
    dim = _quotient_dim(fs, N, m)
    prev = _quotient_dim(fs, N - 1, m) if N >= 1 else None
    return MilnorEstimate(dim, N, prev is not None and prev == dim, prev)
