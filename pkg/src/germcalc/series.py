"""Truncated multivariate power series with exact or floating coefficients.

A :class:`Series` in ``m`` variables with truncation order ``N`` stores the
coefficients ``f_n`` of every monomial ``z^n`` with ``|n| <= N`` (missing keys
are zero).  Nothing is known about higher degrees, so every operation returns
the largest truncation at which its result is fully determined by the inputs.

Exact coefficients are :class:`fractions.Fraction` or :class:`GaussianRational`;
approximate ones are Python ``complex``.  Mixed arithmetic promotes to complex.
"""

from __future__ import annotations

import cmath
import functools
import math
import warnings
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping

from .errors import DimensionError, DomainError, NotInvertibleError, TruncationError


# ---------------------------------------------------------------------------
# scalars


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return make_exact(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return make_exact(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return make_exact(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        a, b = self.re, self.im
        c, d = o
        return make_exact(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        c, d = o
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("division by zero")
        a, b = self.re, self.im
        return make_exact((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return GaussianRational(*o) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return 1 / (self ** (-n))
        result, base = Fraction(1), self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) == other
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def conjugate(self):
        return make_exact(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def make_exact(re, im=0):
    """Exact scalar: a Fraction when the imaginary part vanishes."""
    if im == 0:
        return Fraction(re)
    return GaussianRational(re, im)


def is_exact(c) -> bool:
    return isinstance(c, (int, Fraction, GaussianRational))


def to_scalar(c):
    """Normalise a user supplied number to the internal scalar types."""
    if isinstance(c, (Fraction, GaussianRational)):
        return c
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, (float, complex)):
        return complex(c)
    if isinstance(c, str):
        return Fraction(c)
    if hasattr(c, "__complex__"):
        return complex(c)
    raise TypeError(f"unsupported scalar {c!r}")


def abs2(c):
    """Squared modulus, exact for exact scalars."""
    if isinstance(c, GaussianRational):
        return c.abs2()
    if isinstance(c, (int, Fraction)):
        return Fraction(c) * c
    return abs(c) ** 2


def scalar_exp(c):
    if c == 0:
        return Fraction(1)
    if is_exact(c):
        raise DomainError(
            "exp of a nonzero exact constant is transcendental; convert the "
            "series with to_approx() first")
    return cmath.exp(c)


def scalar_log(c):
    """Principal logarithm; exact only for c == 1."""
    if c == 1:
        return Fraction(0)
    if is_exact(c):
        raise DomainError(
            "log of an exact constant other than 1 is transcendental; convert "
            "the series with to_approx() first")
    return cmath.log(c)


# ---------------------------------------------------------------------------
# multi-indexes


def mindex_key(n: tuple) -> tuple:
    """Sort key realising the lexicomogeneous order."""
    return (sum(n), n)


def mindex_cmp(a: Iterable[int], b: Iterable[int]) -> int:
    """Compare two multi-indexes for the lexicomogeneous order.

    Total degree decides first, then plain lexicographic order, so that
    ``(0, 1) < (1, 0) < (0, 2) < (1, 1)``.  Returns -1, 0 or 1.
    """
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise DimensionError(f"multi-index lengths differ: {len(a)} != {len(b)}")
    ka, kb = mindex_key(a), mindex_key(b)
    return (ka > kb) - (ka < kb)


def monomials_of_degree(m: int, d: int) -> list[tuple]:
    """All exponents of length ``m`` and total degree ``d``, increasing order."""
    if m == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(m), d):
        e = [0] * m
        for j in combo:
            e[j] += 1
        out.append(tuple(e))
    out.sort()
    return out


@functools.lru_cache(maxsize=None)
def _monomials_upto(m: int, d: int) -> tuple:
    out = []
    for k in range(d + 1):
        out.extend(monomials_of_degree(m, k))
    return tuple(out)


def monomials(m: int, d: int) -> list[tuple]:
    """All exponents with ``|n| <= d`` in increasing lexicomogeneous order.

    There are ``binomial(m + d, d)`` of them.
    """
    return list(_monomials_upto(m, d))


def mfactorial(n: Iterable[int]) -> int:
    out = 1
    for k in n:
        out *= math.factorial(k)
    return out


@functools.total_ordering
class Unbounded:
    """Valuation of a series whose stored coefficients all vanish.

    Compares greater than every integer.  ``beyond`` is the truncation order
    up to which the series is known to be zero; the true valuation may be any
    integer larger than that, or infinite.
    """

    truncation_limited = True

    def __init__(self, beyond: int):
        self.beyond = beyond

    def __eq__(self, other):
        return isinstance(other, Unbounded)

    def __hash__(self):
        return hash("Unbounded")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return not isinstance(other, Unbounded)

    def __repr__(self):
        return f"Unbounded(beyond={self.beyond})"


# ---------------------------------------------------------------------------
# series


class Series:
    """Truncated power series ``sum_{|n| <= trunc} f_n z^n`` in ``nvars`` variables.

    Instances are immutable.  Two series compare equal when they have the same
    number of variables and their coefficients agree up to the smaller of the
    two truncation orders.
    """

    __slots__ = ("nvars", "trunc", "_c")

    def __init__(self, nvars: int, trunc: int, coeffs: Mapping | None = None):
        if nvars < 0 or trunc < 0:
            raise ValueError("nvars and trunc must be nonnegative")
        c = {}
        for key, val in (coeffs or {}).items():
            key = (key,) if isinstance(key, int) else tuple(key)
            if len(key) != nvars:
                raise DimensionError(f"exponent {key} does not have {nvars} entries")
            if any(k < 0 for k in key):
                raise ValueError(f"negative exponent {key}")
            if sum(key) > trunc:
                raise TruncationError(f"exponent {key} exceeds truncation order {trunc}")
            val = to_scalar(val)
            if val != 0:
                c[key] = c.get(key, 0) + val
        self.nvars = nvars
        self.trunc = trunc
        self._c = {k: v for k, v in c.items() if v != 0}

    @classmethod
    def _raw(cls, nvars, trunc, coeffs):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.trunc = trunc
        obj._c = coeffs
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, trunc: int) -> "Series":
        return cls._raw(nvars, trunc, {})

    @classmethod
    def constant(cls, c, nvars: int, trunc: int) -> "Series":
        c = to_scalar(c)
        return cls._raw(nvars, trunc, {(0,) * nvars: c} if c != 0 else {})

    @classmethod
    def one(cls, nvars: int, trunc: int) -> "Series":
        return cls.constant(1, nvars, trunc)

    @classmethod
    def var(cls, j: int, nvars: int, trunc: int) -> "Series":
        """The coordinate function ``z_j``."""
        if not 0 <= j < nvars:
            raise DimensionError(f"variable index {j} out of range for {nvars} variables")
        if trunc < 1:
            return cls.zero(nvars, trunc)
        e = [0] * nvars
        e[j] = 1
        return cls._raw(nvars, trunc, {tuple(e): Fraction(1)})

    @classmethod
    def variables(cls, nvars: int, trunc: int) -> tuple["Series", ...]:
        return tuple(cls.var(j, nvars, trunc) for j in range(nvars))

    @classmethod
    def monomial(cls, exps, nvars: int, trunc: int, coeff=1) -> "Series":
        return cls(nvars, trunc, {tuple(exps): coeff})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, trunc: int | None = None) -> "Series":
        """One-variable series from the list ``[f_0, f_1, ...]``."""
        coeffs = list(coeffs)
        if trunc is None:
            trunc = max(len(coeffs) - 1, 0)
        return cls(1, trunc, {(n,): c for n, c in enumerate(coeffs) if n <= trunc})

    # access -------------------------------------------------------------

    def items(self) -> Iterator[tuple[tuple, object]]:
        """Nonzero terms in increasing lexicomogeneous order."""
        for key in sorted(self._c, key=mindex_key):
            yield key, self._c[key]

    def coefficient(self, n) -> object:
        n = (n,) if isinstance(n, int) else tuple(n)
        if len(n) != self.nvars:
            raise DimensionError(f"multi-index {n} does not have {self.nvars} entries")
        if sum(n) > self.trunc:
            raise TruncationError(
                f"coefficient of degree {sum(n)} requested from a series truncated at {self.trunc}")
        return self._c.get(n, Fraction(0) if self.is_exact else 0j)

    __getitem__ = coefficient

    def coefficients(self) -> list:
        """Dense coefficient list ``[f_0, ..., f_trunc]`` (one variable only)."""
        if self.nvars != 1:
            raise DimensionError("coefficients() needs a one-variable series")
        zero = Fraction(0) if self.is_exact else 0j
        return [self._c.get((n,), zero) for n in range(self.trunc + 1)]

    @property
    def support(self) -> frozenset:
        return frozenset(self._c)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self._c.values())

    def is_zero(self) -> bool:
        return not self._c

    def constant_term(self):
        return self._c.get((0,) * self.nvars, Fraction(0) if self.is_exact else 0j)

    def degree(self) -> int:
        """Largest total degree carrying a nonzero stored coefficient (-1 for zero)."""
        return max((sum(k) for k in self._c), default=-1)

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "Series"):
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise DimensionError(f"variable counts differ: {self.nvars} != {other.nvars}")

    def _lift(self, other):
        if isinstance(other, Series):
            self._check(other)
            return other
        return Series.constant(other, self.nvars, self.trunc)

    def __add__(self, other):
        other = self._lift(other)
        N = min(self.trunc, other.trunc)
        c = {k: v for k, v in self._c.items() if sum(k) <= N}
        for k, v in other._c.items():
            if sum(k) <= N:
                s = c.get(k, 0) + v
                if s != 0:
                    c[k] = s
                else:
                    c.pop(k, None)
        return Series._raw(self.nvars, N, c)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.nvars, self.trunc, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        return Series._raw(self.nvars, min(self.trunc, other.trunc),
                           _mul_dict(self._c, other._c, min(self.trunc, other.trunc)))

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.reciprocal()
        other = to_scalar(other)
        if other == 0:
            raise ZeroDivisionError("division of a series by zero")
        return self.scale(1 / other)

    def scale(self, c) -> "Series":
        c = to_scalar(c)
        if c == 0:
            return Series.zero(self.nvars, self.trunc)
        return Series._raw(self.nvars, self.trunc, {k: v * c for k, v in self._c.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Series.one(self.nvars, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def reciprocal(self) -> "Series":
        """Multiplicative inverse of a series with nonzero constant term."""
        c0 = self.constant_term()
        if c0 == 0:
            raise NotInvertibleError("series with zero constant term has no reciprocal")
        u = self.scale(1 / c0) - 1
        # 1/(1+u) = sum (-u)^p, u has zero constant term
        out = Series.one(self.nvars, self.trunc)
        term = Series.one(self.nvars, self.trunc)
        for _ in range(self.trunc):
            term = -(term * u)
            if term.is_zero():
                break
            out = out + term
        return out.scale(1 / c0)

    # equality -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Series):
            if other.nvars != self.nvars:
                return False
            N = min(self.trunc, other.trunc)
            a = {k: v for k, v in self._c.items() if sum(k) <= N}
            b = {k: v for k, v in other._c.items() if sum(k) <= N}
            return a == b
        try:
            other = to_scalar(other)
        except TypeError:
            return NotImplemented
        return self == Series.constant(other, self.nvars, self.trunc)

    __hash__ = None

    def allclose(self, other: "Series", tol: float = 1e-12, relative: bool = True) -> bool:
        """Coefficient-wise closeness up to the common truncation.

        With ``relative=True`` the tolerance is scaled by ``max(1, max|coef|)``.
        """
        self._check(other)
        N = min(self.trunc, other.trunc)
        keys = {k for k in self._c if sum(k) <= N} | {k for k in other._c if sum(k) <= N}
        if not keys:
            return True
        diffs = [abs(complex(self._c.get(k, 0)) - complex(other._c.get(k, 0))) for k in keys]
        scale = 1.0
        if relative:
            scale = max([1.0] + [abs(complex(v)) for v in self._c.values()]
                        + [abs(complex(v)) for v in other._c.values()])
        return max(diffs) <= tol * scale

    # structural operations ----------------------------------------------

    def jet(self, N: int) -> "Series":
        N = min(N, self.trunc)
        if N < 0:
            raise ValueError("jet order must be nonnegative")
        return Series._raw(self.nvars, N, {k: v for k, v in self._c.items() if sum(k) <= N})

    def with_trunc(self, N: int) -> "Series":
        """Re-declare the truncation order.

        Lowering is always allowed.  Raising is only sound when the series is a
        polynomial known exactly (missing coefficients are then genuinely 0).
        """
        if N <= self.trunc:
            return self.jet(N)
        return Series._raw(self.nvars, N, dict(self._c))

    def derive(self, j: int) -> "Series":
        if not 0 <= j < self.nvars:
            raise DimensionError(f"variable index {j} out of range for {self.nvars} variables")
        if self.trunc == 0:
            warnings.warn("derivative of a series truncated at order 0 is undetermined; "
                          "returning the zero series", RuntimeWarning, stacklevel=2)
            return Series.zero(self.nvars, 0)
        c = {}
        for k, v in self._c.items():
            if k[j] > 0:
                e = list(k)
                e[j] -= 1
                c[tuple(e)] = v * k[j]
        return Series._raw(self.nvars, self.trunc - 1, c)

    def valuation(self):
        """Least total degree of a nonzero coefficient, or :class:`Unbounded`."""
        if not self._c:
            return Unbounded(self.trunc)
        return min(sum(k) for k in self._c)

    def homogeneous_part(self, d: int) -> "Series":
        if d > self.trunc:
            raise TruncationError(f"degree {d} beyond truncation {self.trunc}")
        return Series._raw(self.nvars, self.trunc, {k: v for k, v in self._c.items() if sum(k) == d})

    def map_coefficients(self, fn) -> "Series":
        c = {}
        for k, v in self._c.items():
            w = fn(v)
            if w != 0:
                c[k] = w
        return Series._raw(self.nvars, self.trunc, c)

    def to_approx(self) -> "Series":
        return self.map_coefficients(complex)

    def embed(self, nvars: int, positions: Iterable[int]) -> "Series":
        """Re-express in ``nvars`` variables, old variable ``i`` becoming ``positions[i]``."""
        positions = list(positions)
        if len(positions) != self.nvars:
            raise DimensionError("one target position per variable is required")
        c = {}
        for k, v in self._c.items():
            e = [0] * nvars
            for i, p in enumerate(positions):
                e[p] += k[i]
            c[tuple(e)] = v
        return Series._raw(nvars, self.trunc, c)

    def substitute_zero(self, positions: Iterable[int]) -> "Series":
        """Set the variables at ``positions`` to zero and drop them."""
        positions = set(positions)
        keep = [i for i in range(self.nvars) if i not in positions]
        c = {}
        for k, v in self._c.items():
            if all(k[i] == 0 for i in positions):
                c[tuple(k[i] for i in keep)] = v
        return Series._raw(len(keep), self.trunc, c)

    def evaluate(self, point) -> complex:
        """Evaluate the stored polynomial at a numeric point."""
        point = [complex(p) for p in point]
        if len(point) != self.nvars:
            raise DimensionError("point dimension mismatch")
        total = 0j
        for k, v in self._c.items():
            term = complex(v)
            for p, e in zip(point, k):
                if e:
                    term *= p ** e
            total += term
        return total

    # display ------------------------------------------------------------

    def __repr__(self):
        return f"Series(nvars={self.nvars}, trunc={self.trunc}, {self.format()})"

    def format(self, names: Iterable[str] | None = None) -> str:
        if names is None:
            names = ["z"] if self.nvars == 1 else [f"z{j}" for j in range(self.nvars)]
        names = list(names)
        parts = []
        for k, v in self.items():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e)
            if mono:
                parts.append(f"({v})*{mono}" if v != 1 else mono)
            else:
                parts.append(f"{v}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.trunc + 1})"

    __str__ = format


def _mul_dict(a: dict, b: dict, N: int) -> dict:
    if not a or not b:
        return {}
    by_deg: dict[int, list] = {}
    for k, v in b.items():
        by_deg.setdefault(sum(k), []).append((k, v))
    out: dict = {}
    for ka, va in a.items():
        da = sum(ka)
        if da > N:
            continue
        for db in range(N - da + 1):
            for kb, vb in by_deg.get(db, ()):
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, 0) + va * vb
    return {k: v for k, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# functional aliases


def series_add(f: Series, g: Series) -> Series:
    return f + g


def series_mul(f: Series, g: Series) -> Series:
    return f * g


def jet(f: Series, N: int) -> Series:
    return f.jet(N)


def taylor_coeff(f: Series, n) -> object:
    return f.coefficient(n)


def valuation(f: Series):
    return f.valuation()


def derive(f: Series, j: int = 0) -> Series:
    return f.derive(j)


def exp_series(g: Series) -> Series:
    """``exp(g)`` truncated like ``g``.

    With a nonzero constant term ``c`` the result is ``e^c * exp(g - c)``, which
    needs approximate scalars unless ``c == 0``.
    """
    c0 = g.constant_term()
    u = g - c0 if c0 != 0 else g
    out = Series.one(g.nvars, g.trunc)
    term = Series.one(g.nvars, g.trunc)
    for p in range(1, g.trunc + 1):
        term = (term * u).scale(Fraction(1, p))
        if term.is_zero():
            break
        out = out + term
    if c0 != 0:
        out = out.scale(scalar_exp(c0))
    return out
