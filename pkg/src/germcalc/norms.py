"""Weighted l1 norms on germs and the quantitative estimates of the factorial family.

For a positive sequence ``a`` the a-norm is ``||f||_a = sum a_n |f_n|``; it is a
genuine norm on convergent germs when ``a_n ** (1/n) -> 0``.  The factorial
weights ``a(alpha)_n = n! ** -alpha`` (``n!`` read as ``n_1! ... n_m!`` for a
multi-index) are the main example.

Norms of truncated series are partial sums: they are lower bounds for the norm
of any germ with the given jet, never the germ's norm itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InconclusiveError, InvalidWeightError, TruncationError
from .series import GaussianRational, Series, is_exact

#: slack used when an inequality has to be checked in floating point
FLOAT_SLACK = 1e-12
#: ranks added on both sides of the analytic argmax localisation
SEARCH_MARGIN = 8
#: relative tolerance of the bisection for r_{k, alpha, beta}
BISECTION_RTOL = 1e-9


def _exact_number(x) -> Fraction | None:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    return None


class WeightSequence:
    """A positive weight sequence, either factorial or given by a finite table.

    ``WeightSequence.factorial(alpha)`` gives ``a_n = n! ** -alpha``; weights are
    exact Fractions when ``alpha`` is a nonnegative integer.  An explicit table
    ``a_0, ..., a_L`` may carry a ``tail`` sequence used beyond ``L``.
    Multi-index weights are ``prod a(alpha)_{n_j}`` for the factorial family and
    ``a_{|n|}`` for tables.
    """

    def __init__(self, table: Sequence | None = None, alpha=None, tail: "WeightSequence | None" = None):
        if (table is None) == (alpha is None):
            raise ValueError("give exactly one of table or alpha")
        if alpha is not None:
            if alpha <= 0:
                raise InvalidWeightError(f"factorial exponent must be positive, got {alpha}")
            a = _exact_number(alpha)
            self.alpha = a if a is not None and a.denominator == 1 else float(alpha)
            self.table = None
        else:
            table = [Fraction(t) if isinstance(t, (int, Fraction, str)) else float(t) for t in table]
            bad = [n for n, t in enumerate(table) if not t > 0]
            if bad:
                raise InvalidWeightError(f"weights must be positive; index {bad[0]} is {table[bad[0]]}")
            if not table:
                raise InvalidWeightError("empty weight table")
            self.alpha = None
            self.table = table
        self.tail = tail

    @classmethod
    def factorial(cls, alpha) -> "WeightSequence":
        return cls(alpha=alpha)

    @property
    def is_factorial(self) -> bool:
        return self.alpha is not None

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, Fraction) or (
            self.table is not None and all(isinstance(t, Fraction) for t in self.table))

    def __repr__(self):
        if self.is_factorial:
            return f"WeightSequence.factorial({self.alpha})"
        return f"WeightSequence(table of {len(self.table)}, tail={self.tail!r})"

    def log_weight(self, n: int) -> float:
        if self.is_factorial:
            return -float(self.alpha) * math.lgamma(n + 1)
        return math.log(self.weight(n))

    def weight(self, n: int):
        """Weight of degree ``n`` (an int)."""
        if n < 0:
            raise ValueError("negative index")
        if self.is_factorial:
            if isinstance(self.alpha, Fraction):
                return Fraction(1, math.factorial(n) ** int(self.alpha))
            return math.exp(self.log_weight(n))
        if n < len(self.table):
            return self.table[n]
        if self.tail is not None:
            return self.tail.weight(n)
        raise TruncationError(f"weight table has {len(self.table)} entries, index {n} requested")

    def mweight(self, exps: tuple):
        """Weight of a multi-index."""
        if self.is_factorial:
            if isinstance(self.alpha, Fraction):
                den = 1
                for e in exps:
                    den *= math.factorial(e)
                return Fraction(1, den ** int(self.alpha))
            return math.exp(-float(self.alpha) * sum(math.lgamma(e + 1) for e in exps))
        return self.weight(sum(exps))


def factorial_weights(alpha) -> WeightSequence:
    return WeightSequence.factorial(alpha)


def modulus(c):
    """|c|: exact for rational (real) scalars, float otherwise."""
    if isinstance(c, (int, Fraction)):
        return abs(Fraction(c))
    if isinstance(c, GaussianRational):
        if c.im == 0:
            return abs(c.re)
        return abs(c)
    return abs(c)


@dataclass(frozen=True)
class NormReport:
    """Partial a-norm over the stored support of a truncated series.

    ``value`` is exact (a Fraction) when weights and moduli are rational.
    ``tail_bounded`` is always False: the unseen tail can only add to the norm.
    """

    value: object
    truncation_order: int
    tail_bounded: bool = False

    @property
    def is_lower_bound(self) -> bool:
        return not self.tail_bounded

    def __float__(self):
        return float(self.value)


def a_norm(f: Series, a: WeightSequence) -> NormReport:
    total = Fraction(0)
    for k, v in f.items():
        total = total + a.mweight(k) * modulus(v)
    return NormReport(total, f.trunc, False)


def norm_value(f: Series, a: WeightSequence):
    return a_norm(f, a).value


@dataclass(frozen=True)
class Amplitude:
    value: float
    argmax: int


def amplitude(a: WeightSequence, r: float) -> Amplitude:
    """``max_n a_n r^n`` together with the maximising rank.

    For factorial weights the maximiser lies within one rank of
    ``ceil(r ** (1/alpha))``; the scan covers that window widened by
    ``SEARCH_MARGIN`` ranks.  Ties resolve to the smallest rank.
    """
    if not r > 0:
        raise ValueError("amplitude needs r > 0")
    logr = math.log(r)
    if a.is_factorial:
        centre = math.ceil(r ** (1.0 / float(a.alpha)))
        ranks = range(max(0, centre - 1 - SEARCH_MARGIN), centre + 1 + SEARCH_MARGIN + 1)
        best = max(ranks, key=lambda n: (a.log_weight(n) + n * logr, -n))
        return Amplitude(math.exp(a.log_weight(best) + best * logr), best)
    L = len(a.table)
    vals = [a.log_weight(n) + n * logr for n in range(L)]
    best = max(range(L), key=lambda n: (vals[n], -n))
    if a.tail is not None:
        tail_amp = amplitude(a.tail, r)
        if tail_amp.argmax >= L and math.log(tail_amp.value) > vals[best]:
            return tail_amp
        return Amplitude(math.exp(vals[best]), best)
    if best == L - 1:
        raise InconclusiveError(
            f"maximum of a_n r^n sits at the last tabulated rank {best}; the table cannot certify it")
    return Amplitude(math.exp(vals[best]), best)


def comparison(a: WeightSequence, x, N: int):
    """Partial sum ``sum_{n <= N} a_n x^n`` of the comparison function."""
    total = Fraction(0)
    power = Fraction(1) if is_exact(x) else 1.0
    for n in range(N + 1):
        total = total + a.weight(n) * power
        power = power * x
    return total


@dataclass(frozen=True)
class RadiusEstimate:
    """Finite-window estimates of ``liminf |f_n| ** (-1/n)``.

    ``lower``/``upper`` are the min/max of ``|f_n| ** (-1/n)`` over the window;
    ``unbounded`` flags a window of zero coefficients (``upper`` is then inf).
    A truncated series can never certify the limit, hence ``certified=False``.
    """

    lower: float
    upper: float
    window: tuple[int, int]
    unbounded: bool
    certified: bool = False


def radius_bounds(f: Series, window: tuple[int, int] | None = None) -> RadiusEstimate:
    """Hadamard-type radius estimates from the tail of a truncated series.

    For several variables ``|f_n|`` is replaced by ``max_{|n| = k} |f_n|``.
    The default window is ``[ceil(trunc/2), trunc]``.
    """
    if f.trunc < 2:
        raise TruncationError("radius estimates need truncation order >= 2")
    lo, hi = window if window is not None else (max(1, (f.trunc + 1) // 2), f.trunc)
    hi = min(hi, f.trunc)
    sizes = {}
    for k, v in f.items():
        d = sum(k)
        if lo <= d <= hi:
            sizes[d] = max(sizes.get(d, 0.0), float(abs(complex(v))))
    roots = []
    zero_seen = False
    for d in range(lo, hi + 1):
        s = sizes.get(d, 0.0)
        if s == 0.0:
            zero_seen = True
        else:
            roots.append(math.exp(-math.log(s) / d))
    if not roots:
        return RadiusEstimate(math.inf, math.inf, (lo, hi), True)
    upper = math.inf if zero_seen else max(roots)
    return RadiusEstimate(min(roots), upper, (lo, hi), False)


# ---------------------------------------------------------------------------
# derivative constants


def _bisect_r(k: int, alpha: float, beta: float) -> float:
    """Positive root of ``(x + k)^(beta+1) = x^(alpha+1)``."""
    if k == 0:
        return 1.0
    g = lambda x: (alpha + 1) * math.log(x) - (beta + 1) * math.log(x + k)
    lo, hi = 1e-12, 2.0
    while g(hi) < 0:
        lo, hi = hi, hi * 2
    while hi - lo > BISECTION_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DerivConstant:
    """``D_{k,alpha,beta} = sup_n (n+k)!^(beta+1) / n!^(alpha+1)``.

    ``argmax`` is the rank ``n`` attaining it; the monomial ``z^(argmax + k)``
    realises equality in the derivative bound.  ``r`` solves
    ``(x + k)^(beta+1) = x^(alpha+1)``.
    """

    value: float
    argmax: int
    r: float
    log_value: float
    k: int
    alpha: float
    beta: float


def _log_dterm(n: int, k: int, alpha: float, beta: float) -> float:
    return (beta + 1) * math.lgamma(n + k + 1) - (alpha + 1) * math.lgamma(n + 1)


def deriv_constant(k: int, alpha: float, beta: float) -> DerivConstant:
    if not alpha > beta > 0:
        raise ValueError(f"need alpha > beta > 0, got alpha={alpha}, beta={beta}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    alpha, beta = float(alpha), float(beta)
    r = _bisect_r(k, alpha, beta)
    centre = math.ceil(r)
    ranks = range(max(0, centre - 1 - SEARCH_MARGIN), centre + 1 + SEARCH_MARGIN + 1)
    logs = {n: _log_dterm(n, k, alpha, beta) for n in ranks}
    top = max(logs.values())
    # ties (up to rounding) go to the smallest rank
    best = min(n for n, v in logs.items() if v >= top - 1e-12 * max(1.0, abs(top)))
    value = math.exp(logs[best]) if logs[best] < 700 else math.inf
    return DerivConstant(value, best, r, logs[best], k, alpha, beta)


def exact_deriv_term(n: int, k: int, alpha: int, beta: int) -> Fraction:
    """``(n+k)!^(beta+1) / n!^(alpha+1)`` for integer exponents."""
    return Fraction(math.factorial(n + k) ** (beta + 1), math.factorial(n) ** (alpha + 1))


def derivative_bound(f: Series, k: int, alpha, beta, j: int = 0):
    """Both sides of the k-th derivative estimate for a one-variable series.

    Returns ``(lhs, rhs, D)`` with ``lhs = ||d^k f/dz^k||_{a(alpha)}`` and
    ``rhs = D * ||f - J_{k-1} f||_{a(beta)}``.  The jet removed is the one of
    order ``k - 1``: the degree-``k`` coefficient of ``f`` does contribute to the
    derivative (``d^k z^k = k!``), so it must stay on the right-hand side.
    Truncation only drops nonnegative terms from the left.
    """
    D = deriv_constant(k, alpha, beta)
    g = f
    for _ in range(k):
        g = g.derive(j)
    lhs = norm_value(g, factorial_weights(alpha))
    rest = f if k == 0 else f - f.jet(k - 1).with_trunc(f.trunc)
    rhs_norm = norm_value(rest, factorial_weights(beta))
    return lhs, D.value * float(rhs_norm), D


# ---------------------------------------------------------------------------
# inequality witnesses


@dataclass(frozen=True)
class BoundWitness:
    holds: bool
    lhs: object
    rhs: object
    exact: bool


def _leq(lhs, rhs) -> tuple[bool, bool]:
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs <= rhs, True
    l, r = float(lhs), float(rhs)
    return l <= r + FLOAT_SLACK * max(1.0, abs(r)), False


def check_product_bound(f: Series, g: Series, alpha) -> BoundWitness:
    """``||f g||_{a(alpha)} <= ||f||_{a(alpha)} ||g||_{a(alpha)}``."""
    a = factorial_weights(alpha)
    lhs = norm_value(f * g, a)
    rhs = norm_value(f, a) * norm_value(g, a)
    holds, exact = _leq(lhs, rhs)
    return BoundWitness(holds, lhs, rhs, exact)


def check_composition_bound(f: Series, g: Series, alpha, beta) -> BoundWitness:
    """``||f o g||_{a(alpha)} <= ||f||_{a(beta)} * amp_{a(alpha-beta)}(||g||_{a(alpha)})``.

    One variable, ``g(0) = 0``.
    """
    from .calculus import compose

    lhs = norm_value(compose(f, g), factorial_weights(alpha))
    gn = float(norm_value(g, factorial_weights(alpha)))
    amp = amplitude(factorial_weights(alpha - beta), gn).value if gn > 0 else 1.0
    rhs = float(norm_value(f, factorial_weights(beta))) * amp
    holds, exact = _leq(lhs, rhs)
    return BoundWitness(holds, lhs, rhs, exact)


def check_derivative_bound(f: Series, k: int, alpha, beta) -> BoundWitness:
    lhs, rhs, _ = derivative_bound(f, k, alpha, beta)
    holds, exact = _leq(lhs, rhs)
    return BoundWitness(holds, lhs, rhs, exact)


def naive_polydisc_radius(a: WeightSequence, r: Callable[[int], float] | Sequence[float],
                          window: int, start: int = 0) -> float:
    """Tail-window estimate of ``liminf a_n r_n``.

    This liminf is the largest radius of an a-ball contained in the naive
    polydisc of poly-radius ``r``; the estimate is the minimum of ``a_n r_n``
    over ``n`` in ``[max(start, ceil(window/2)), window]``.
    """
    get = r if callable(r) else r.__getitem__
    lo = max(start, (window + 1) // 2)
    vals = []
    for n in range(lo, window + 1):
        rn = get(n)
        if not rn > 0:
            raise InvalidWeightError(f"poly-radius must be positive, r_{n} = {rn}")
        vals.append(a.weight(n) * rn)
    return float(min(vals))
