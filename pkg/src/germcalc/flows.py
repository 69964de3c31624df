"""Flows of truncated vector fields and the companion field of a scalar ODE.

The flow of ``X`` is given by Lie's formula

    Phi(z, t) = sum_k t^k / k! * X^k(Id),

where ``X^k`` is the ``k``-fold Lie derivative.  Flow series live in ``m + 1``
variables, the time ``t`` being the last one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .calculus import compose
from .errors import DimensionError, DomainError, TruncationError
from .series import Series

DEFAULT_ORDER = 8


class VectorField:
    """A tuple ``(X_1, ..., X_m)`` of series in ``m`` variables, meaning ``sum X_j d/dz_j``."""

    def __init__(self, components: Sequence[Series]):
        comps = tuple(components)
        if not comps:
            raise DimensionError("a vector field needs at least one component")
        m = len(comps)
        if any(c.nvars != m for c in comps):
            raise DimensionError(f"each of the {m} components must be a series in {m} variables")
        self.trunc = min(c.trunc for c in comps)
        self.components = tuple(c.jet(self.trunc) for c in comps)
        self.m = m

    @classmethod
    def zero(cls, m: int, trunc: int) -> "VectorField":
        return cls([Series.zero(m, trunc)] * m)

    def __getitem__(self, j):
        return self.components[j]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return self.m

    def __eq__(self, other):
        if not isinstance(other, VectorField) or other.m != self.m:
            return NotImplemented
        return all(a == b for a, b in zip(self, other))

    def scale(self, c) -> "VectorField":
        return VectorField([x.scale(c) for x in self])

    def __call__(self, f: Series) -> Series:
        return lie_derivative(self, f)

    def at_origin(self) -> tuple:
        return tuple(c.constant_term() for c in self)

    def __repr__(self):
        return f"VectorField({', '.join(c.format() for c in self)})"


def lie_derivative(X: VectorField, f: Series) -> Series:
    """``X.f = sum_j X_j * df/dz_j``, truncated at ``min(trunc X, trunc f - 1)``."""
    if f.nvars != X.m:
        raise DimensionError(f"field in {X.m} variables applied to a series in {f.nvars}")
    if f.trunc < 1:
        raise TruncationError("the Lie derivative needs trunc >= 1")
    N = min(X.trunc, f.trunc - 1)
    out = Series.zero(X.m, N)
    for j, Xj in enumerate(X):
        d = f.derive(j)
        if not d.is_zero():
            out = out + Xj.jet(N) * d.jet(N)
    return out


def iterated_lie_derivative(X: VectorField, f: Series, k: int) -> Series:
    for _ in range(k):
        f = lie_derivative(X, f)
    return f


@dataclass(frozen=True)
class FlowSeries:
    """Components of ``Phi(z, t)``: series in ``m + 1`` variables, ``t`` last."""

    components: tuple
    order: int

    @property
    def m(self) -> int:
        return len(self.components)

    def __getitem__(self, j) -> Series:
        return self.components[j]

    def at_time_zero(self) -> tuple:
        return tuple(c.substitute_zero([self.m]) for c in self.components)

    def orbit_of_origin(self) -> tuple:
        """``t -> Phi(0, t)`` as univariate series."""
        return tuple(c.substitute_zero(range(self.m)) for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, FlowSeries):
            return NotImplemented
        return self.m == other.m and all(a == b for a, b in zip(self.components, other.components))


def flow_series(X: VectorField, order: int = DEFAULT_ORDER) -> FlowSeries:
    """Lie series of the flow, exact to total degree ``order`` in ``(z, t)``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if X.trunc < order:
        raise TruncationError(f"flow to order {order} needs the field truncated at >= {order}, got {X.trunc}")
    m = X.m
    positions = list(range(m))
    t = Series.var(m, m + 1, order)
    comps = []
    for j in range(m):
        f = Series.var(j, m, order)
        total = f.embed(m + 1, positions)
        tk = Series.one(m + 1, order)
        for k in range(1, order + 1):
            f = lie_derivative(X, f)
            tk = tk * t
            if f.is_zero():
                break
            # f is exact to order - k, and t^k restores the total degree
            total = total + (tk * f.embed(m + 1, positions).with_trunc(order)).scale(Fraction(1, factorial(k)))
        comps.append(total)
    return FlowSeries(tuple(comps), order)


def _time_derivative(Phi: FlowSeries) -> tuple:
    return tuple(c.derive(Phi.m) for c in Phi.components)


def flow_residual(X: VectorField, Phi: FlowSeries) -> tuple:
    """``dPhi/dt - X(Phi)``, truncated at ``order - 1``.

    ``Phi`` vanishes at the origin of ``(z, t)``, so ``X`` composes with it directly.
    """
    if X.m != Phi.m:
        raise DimensionError("field and flow have different dimensions")
    dt = _time_derivative(Phi)
    out = []
    for j, Xj in enumerate(X):
        XPhi = compose(Xj, Phi.components)
        N = min(dt[j].trunc, XPhi.trunc)
        out.append(dt[j].jet(N) - XPhi.jet(N))
    return tuple(out)


def flow_group_defect(Phi: FlowSeries) -> tuple:
    """``Phi^{t1} o Phi^{t2} - Phi^{t1 + t2}`` in variables ``(z, t1, t2)``."""
    m = Phi.m
    n = m + 2
    N = Phi.order
    inner = [c.embed(n, list(range(m)) + [m + 1]) for c in Phi.components]
    t1 = Series.var(m, n, N)
    t2 = Series.var(m + 1, n, N)
    lhs = [compose(c, inner + [t1]) for c in Phi.components]
    zs = [Series.var(j, n, N) for j in range(m)]
    rhs = [compose(c, zs + [t1 + t2]) for c in Phi.components]
    return tuple(a - b for a, b in zip(lhs, rhs))


def rescale_time(Phi: FlowSeries, lam) -> FlowSeries:
    """``Phi(z, lam * t)``: the flow of ``lam * X``."""
    m = Phi.m
    N = Phi.order
    subs = [Series.var(j, m + 1, N) for j in range(m)] + [Series.var(m, m + 1, N).scale(lam)]
    return FlowSeries(tuple(compose(c, subs) for c in Phi.components), N)


def orbit(X: VectorField, order: int, start=None) -> tuple:
    """The integral curve ``gamma(t)`` with ``gamma(0) = start`` (default the origin).

    Picard iteration on univariate series; each pass fixes one more degree.
    Only the origin is supported as a formal starting point, since composing
    ``X`` with a curve that does not pass through ``0`` needs convergence.
    """
    if start is not None and any(s != 0 for s in start):
        raise DomainError("formal orbits are only available from the origin")
    if X.trunc < order - 1:
        raise TruncationError(f"orbit to order {order} needs the field truncated at >= {order - 1}")
    gamma = [Series.zero(1, order) for _ in range(X.m)]
    for _ in range(order):
        vel = [compose(x, gamma) for x in X]
        gamma = [_integrate(v, order) for v in vel]
    return tuple(gamma)


def _integrate(v: Series, order: int) -> Series:
    return Series(1, order, {(k[0] + 1,): c / (k[0] + 1) for k, c in v.items() if k[0] + 1 <= order})


# ---------------------------------------------------------------------------
# scalar ODEs


@dataclass(frozen=True)
class OdeSpec:
    """The equation ``P(z, f, f', ..., f^(k)) = 0``.

    ``P`` is a series in ``k + 2`` variables ordered ``(z, d_0, ..., d_k)``.
    """

    k: int
    P: Series

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("order k must be nonnegative")
        if self.P.nvars != self.k + 2:
            raise DimensionError(f"P must have {self.k + 2} variables (z, d_0..d_{self.k})")
        if self.P.trunc < 1:
            raise TruncationError("P must be known to order >= 1")
        if self.P.derive(self.k + 1).constant_term() == 0:
            raise DomainError("degenerate equation: dP/dd_k vanishes at the origin")


def companion_field(spec: OdeSpec) -> VectorField:
    """``d/dz + sum_{j<k} d_{j+1} d/dd_j - (P_z + sum_{j<k} P_{d_j} d_{j+1}) / P_{d_k} d/dd_k``."""
    k, P = spec.k, spec.P
    n = k + 2
    N = P.trunc - 1
    numer = P.derive(0)
    for j in range(k):
        numer = numer + P.derive(j + 1) * Series.var(j + 2, n, N)
    last = -(numer * P.derive(k + 1).reciprocal())
    comps = [Series.one(n, N)]
    comps += [Series.var(j + 2, n, N) for j in range(k)]
    comps.append(last)
    return VectorField(comps)


def ode_solve(J: Series | None, spec: OdeSpec, order: int = DEFAULT_ORDER) -> Series:
    """``J(z)`` plus the ``d_0``-component of the companion flow from the origin at time ``z``.

    The orbit of the origin is computed directly (``Phi(0, t)``), then ``t`` is
    renamed ``z``.
    """
    X = companion_field(spec)
    gamma = orbit(X, order)
    f = gamma[1]
    if J is not None:
        if J.nvars != 1:
            raise DimensionError("the jet J must be univariate")
        if not J.is_zero() and J.degree() > spec.k:
            raise DomainError(f"J must have degree <= {spec.k}")
        f = f + J.with_trunc(order)
    return f
