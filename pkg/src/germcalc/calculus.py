"""Composition, compositional inversion and the diffeomorphism-group toolkit.

Composition ``f o g`` is only formed when every component of ``g`` vanishes at
the origin: then the degree-n coefficient of ``f o g`` involves finitely many
coefficients of ``f`` and ``g`` and the truncated result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, DomainError, NotInvertibleError
from .series import Series, exp_series, is_exact, scalar_log


def _as_tuple(g) -> tuple[Series, ...]:
    return (g,) if isinstance(g, Series) else tuple(g)


def compose(f: Series, g: Series | Sequence[Series]) -> Series:
    """Substitute ``z_j <- g_j`` into ``f``.

    ``f`` has ``len(g)`` variables; the ``g_j`` share their own variable count
    and must vanish at the origin.  The result is truncated at
    ``min(trunc f, trunc g_j)``.
    """
    gs = _as_tuple(g)
    if len(gs) != f.nvars:
        raise DimensionError(f"f has {f.nvars} variables but {len(gs)} substitutions were given")
    if not gs:
        raise DimensionError("nothing to substitute")
    m = gs[0].nvars
    for gj in gs:
        if gj.nvars != m:
            raise DimensionError("substituted series must share their variables")
        if gj.constant_term() != 0:
            raise DomainError("composition needs g(0) = 0 for every component")
    N = min([f.trunc] + [gj.trunc for gj in gs])
    gs = [gj.jet(N) for gj in gs]
    # powers g_j^e, built lazily
    powers: list[list[Series]] = [[Series.one(m, N)] for _ in gs]

    def power(j, e):
        p = powers[j]
        while len(p) <= e:
            p.append(p[-1] * gs[j])
        return p[e]

    out: dict = {}
    for k, v in f.items():
        if sum(k) > N:
            continue
        term = None
        for j, e in enumerate(k):
            if e:
                term = power(j, e) if term is None else term * power(j, e)
        if term is None:
            key = (0,) * m
            out[key] = out.get(key, 0) + v
            continue
        for key, c in term._c.items():
            out[key] = out.get(key, 0) + v * c
    return Series._raw(m, N, {k: c for k, c in out.items() if c != 0})


def identity(trunc: int) -> Series:
    return Series.var(0, 1, trunc)


# ---------------------------------------------------------------------------
# germs of diffeomorphisms of (C, 0)


class DiffeoGerm:
    """Germ ``a_1 z + a_2 z^2 + ...`` with ``a_1 != 0``, stored as a truncated series."""

    __slots__ = ("series",)

    def __init__(self, series: Series):
        if series.nvars != 1:
            raise DimensionError("a germ of diffeomorphism of (C,0) has one variable")
        if series.trunc < 1:
            raise DomainError("truncation order must be at least 1")
        if series.constant_term() != 0:
            raise DomainError("a germ of diffeomorphism must fix the origin")
        if series.coefficient((1,)) == 0:
            raise NotInvertibleError("linear coefficient vanishes")
        self.series = series

    @classmethod
    def from_coefficients(cls, coeffs, trunc: int | None = None) -> "DiffeoGerm":
        """From ``[a_1, a_2, ...]`` (the constant term is implicitly zero)."""
        coeffs = [0] + list(coeffs)
        return cls(Series.from_coefficients(coeffs, trunc))

    @classmethod
    def identity(cls, trunc: int) -> "DiffeoGerm":
        return cls(identity(trunc))

    @property
    def trunc(self) -> int:
        return self.series.trunc

    @property
    def multiplier(self):
        return self.series.coefficient((1,))

    def coefficients(self) -> list:
        return self.series.coefficients()

    def __matmul__(self, other: "DiffeoGerm") -> "DiffeoGerm":
        """``self @ other`` is the composition ``self o other``."""
        return DiffeoGerm(compose(self.series, other.series))

    def __call__(self, x):
        return self.series.evaluate([x])

    def inverse(self) -> "DiffeoGerm":
        return comp_inverse(self)

    def __pow__(self, n: int) -> "DiffeoGerm":
        if n < 0:
            return self.inverse() ** (-n)
        out = DiffeoGerm.identity(self.trunc)
        for _ in range(n):
            out = out @ self
        return out

    def is_identity(self, tol: float | None = None) -> bool:
        return self.series.allclose(identity(self.trunc), tol) if tol is not None \
            else self.series == identity(self.trunc)

    def __eq__(self, other):
        if isinstance(other, DiffeoGerm):
            return self.series == other.series
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"DiffeoGerm({self.series.format()})"


def _series_of(d) -> Series:
    return d.series if isinstance(d, DiffeoGerm) else d


def comp_inverse(d: DiffeoGerm | Series) -> DiffeoGerm:
    """Compositional inverse by a degree-by-degree triangular solve.

    Writing ``h = sum h_n z^n``, the degree-n coefficient of ``d o h`` equals
    ``a_1 h_n`` plus a polynomial in ``h_1, ..., h_{n-1}``; each ``h_n`` is
    chosen to cancel it.
    """
    s = _series_of(d)
    if not isinstance(d, DiffeoGerm):
        d = DiffeoGerm(s)
    N = s.trunc
    a1 = s.coefficient((1,))
    inv_a1 = 1 / a1
    h = {(1,): inv_a1}
    for n in range(2, N + 1):
        trial = compose(s.jet(n), Series._raw(1, n, dict(h)))
        c = trial._c.get((n,), 0)
        if c != 0:
            h[(n,)] = -c * inv_a1
    return DiffeoGerm(Series._raw(1, N, {k: v for k, v in h.items() if v != 0}))


def _shift_down(s: Series) -> Series:
    """``s / z`` for a one-variable series vanishing at 0."""
    if s.constant_term() != 0:
        raise DomainError("series does not vanish at the origin")
    return Series._raw(1, s.trunc - 1, {(k[0] - 1,): v for k, v in s._c.items()})


def _shift_up(s: Series) -> Series:
    """``z * s`` with the truncation raised by one."""
    return Series._raw(1, s.trunc + 1, {(k[0] + 1,): v for k, v in s._c.items()})


def diffeo_from(g: Series) -> DiffeoGerm:
    """``z * exp(g)``, truncated one order above ``g``."""
    if g.nvars != 1:
        raise DimensionError("diffeo_from works in one variable")
    return DiffeoGerm(_shift_up(exp_series(g)))


def inversion_map(g: Series) -> DiffeoGerm:
    """``g -> (z exp(g))^{o -1}``."""
    return comp_inverse(diffeo_from(g))


def log_map(h: Series) -> Series:
    """``sum_{p>0} (-1)^(p+1) h^p / p``, the series of ``log(1 + h)``."""
    if h.constant_term() != 0:
        raise DomainError("log_map needs h(0) = 0")
    out = Series.zero(h.nvars, h.trunc)
    power = Series.one(h.nvars, h.trunc)
    for p in range(1, h.trunc + 1):
        power = power * h
        if power.is_zero():
            break
        out = out + power.scale(Fraction((-1) ** (p + 1), p))
    return out


def h_map(g: Series) -> Series:
    """The map with ``diffeo_from(h_map(g)) == inversion_map(g)`` and ``h_map(0) == 0``.

    Computed as ``Log(w_0) + log_map(w / w_0 - 1)`` where ``w = inversion(g) / z``
    and ``Log`` is the principal branch.
    """
    w = _shift_down(inversion_map(g).series)
    w0 = w.constant_term()
    rest = log_map(w.scale(1 / w0) - 1)
    return rest + scalar_log(w0) if w0 != 1 else rest


# ---------------------------------------------------------------------------
# directional derivatives


@dataclass(frozen=True)
class FrechetPair:
    """Closed-form directional derivative next to its finite-difference counterpart."""

    formula: Series
    finite_difference: Series
    exact: bool

    def agree(self, tol: float = 1e-8) -> bool:
        if self.exact:
            return self.formula == self.finite_difference
        return self.formula.allclose(self.finite_difference, tol)


FRECHET_OPS = ("compose", "diffeo", "inverse")


def _apply(op: str, g: Series, f: Series | None) -> Series:
    if op == "compose":
        return compose(f, g)
    if op == "diffeo":
        return diffeo_from(g).series
    if op == "inverse":
        return inversion_map(g).series
    raise ValueError(f"unknown operation {op!r}; expected one of {FRECHET_OPS}")


def frechet_formula(op: str, g: Series, h: Series, f: Series | None = None) -> Series:
    """Closed-form derivative of ``op`` at ``g`` in the direction ``h``."""
    if op == "compose":
        # d(f o g)(h) = (f' o g) * h
        return compose(f.derive(0), g) * h
    if op == "diffeo":
        return diffeo_from(g).series * _pad(h, 1)
    if op == "inverse":
        z = identity(g.trunc)
        kernel = z * h * (1 + z * _pad(g.derive(0), 1)).reciprocal()
        return compose(kernel, inversion_map(g).series).scale(-1)
    raise ValueError(f"unknown operation {op!r}; expected one of {FRECHET_OPS}")


def _pad(s: Series, extra: int) -> Series:
    """Raise the truncation of ``s`` by ``extra`` with unknown terms set to 0.

    Only used where those terms are multiplied away by a factor ``z^extra``.
    """
    return s.with_trunc(s.trunc + extra)


def _eps_polynomial(op: str, g: Series, h: Series) -> bool:
    if op == "compose":
        return True
    if op == "diffeo":
        return h.constant_term() == 0
    return False


def frechet_dir(op: str, g: Series, h: Series, eps=None, f: Series | None = None) -> FrechetPair:
    """Directional derivative of ``op`` at ``g`` along ``h``, two ways.

    ``op`` is ``"compose"`` (``g -> f o g`` for the fixed ``f``), ``"diffeo"``
    (``g -> z exp(g)``) or ``"inverse"`` (``g -> (z exp g)^{o -1}``).

    With exact inputs and an operation polynomial in ``eps`` at the given
    truncation, the finite difference is made exact: ``op(g + e h)`` is sampled at
    symmetric rational nodes ``e = j * eps`` and the linear coefficient of the
    interpolating polynomial is returned.  Otherwise a centred difference with
    complex arithmetic is used (default step 1e-5).
    """
    if op == "compose" and f is None:
        raise ValueError("the compose operation needs the fixed outer series f")
    formula = frechet_formula(op, g, h, f)
    exact = is_exact_series(g) and is_exact_series(h) and (f is None or is_exact_series(f))
    if exact and _eps_polynomial(op, g, h):
        step = Fraction(eps) if eps is not None else Fraction(1, 1000)
        # degree in eps of each coefficient is bounded by the truncation order
        degree = max(g.trunc, h.trunc) + 2
        nodes = [step * j for j in range(-(degree // 2 + 1), degree // 2 + 2)]
        samples = [_apply(op, g + h.scale(e), f) for e in nodes]
        fd = _linear_coefficient(nodes, samples)
        return FrechetPair(formula, fd, True)
    step = float(eps) if eps is not None else 1e-5
    ga, ha = g.to_approx(), h.to_approx()
    fa = f.to_approx() if f is not None else None
    plus = _apply(op, ga + ha.scale(step), fa)
    minus = _apply(op, ga - ha.scale(step), fa)
    fd = (plus - minus).scale(1 / (2 * step))
    return FrechetPair(formula, fd, False)


def is_exact_series(s: Series) -> bool:
    return s.is_exact


def _linear_coefficient(nodes: list, samples: list[Series]) -> Series:
    """Derivative at 0 of the polynomial interpolating ``(nodes, samples)``.

    With Lagrange basis polynomials ``L_j`` the answer is ``sum L_j'(0) s_j``.
    """
    weights = []
    for j, xj in enumerate(nodes):
        others = [x for i, x in enumerate(nodes) if i != j]
        den = Fraction(1)
        for x in others:
            den *= (xj - x)
        # L_j(t) = prod (t - x) / den ; L_j'(0) = sum_i prod_{l != i} (-x_l) / den
        deriv = Fraction(0)
        for i in range(len(others)):
            p = Fraction(1)
            for l, x in enumerate(others):
                if l != i:
                    p *= -x
            deriv += p
        weights.append(deriv / den)
    N = min(s.trunc for s in samples)
    out = Series.zero(samples[0].nvars, N)
    for w, s in zip(weights, samples):
        if w:
            out = out + s.jet(N).scale(w)
    return out


# ---------------------------------------------------------------------------
# group operations


def commutator(f: DiffeoGerm, g: DiffeoGerm) -> DiffeoGerm:
    """``[f, g] = f^{-1} o g^{-1} o f o g``."""
    return f.inverse() @ g.inverse() @ f @ g


@dataclass(frozen=True)
class SolvabilityCheck:
    """Outcome of the jet-level test of ``[f, [f, g o g]] == Id``.

    ``passes`` only means the relation holds up to ``order``; it is a necessary
    condition for solvability of ``<f, g>``, never a certificate.
    """

    passes: bool
    order: int
    failing_degree: int | None
    defect: Series
    tolerance: float | None = None

    @property
    def certified(self) -> bool:
        return False

    def __str__(self):
        if self.passes:
            return (f"relation holds up to order {self.order} "
                    "(necessary condition only, not a certificate)")
        return f"relation fails at degree {self.failing_degree}"


def loray_defect(f: DiffeoGerm, g: DiffeoGerm, order: int | None = None) -> Series:
    """``[f, [f, g o g]] - Id`` truncated at ``order``."""
    N = min(f.trunc, g.trunc) if order is None else order
    if N > min(f.trunc, g.trunc):
        raise DomainError(f"order {N} exceeds the truncation of the generators")
    f = DiffeoGerm(f.series.jet(N))
    g = DiffeoGerm(g.series.jet(N))
    rel = commutator(f, commutator(f, g @ g))
    return rel.series - identity(N)


def solvable2_test(f: DiffeoGerm, g: DiffeoGerm, order: int, tol: float | None = None) -> SolvabilityCheck:
    """Check ``[f, [f, g^2]] = Id`` degree by degree up to ``order``.

    With exact coefficients the comparison is exact; otherwise a coefficient
    counts as nonzero when its modulus exceeds ``tol`` (default 1e-9).
    """
    defect = loray_defect(f, g, order)
    exact = defect.is_exact
    if not exact and tol is None:
        tol = 1e-9
    failing = None
    for d in range(order + 1):
        c = defect._c.get((d,), 0)
        bad = (c != 0) if exact else abs(complex(c)) > tol
        if bad:
            failing = d
            break
    return SolvabilityCheck(failing is None, order, failing, defect, None if exact else tol)

