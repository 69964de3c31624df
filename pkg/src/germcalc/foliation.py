"""Planar foliations with zero linear part: one blow-up and projective holonomy.

The foliation is given by the vector field ``Q d/dx + P d/dy`` with ``P`` and
``Q`` of valuation at least 2.  In the chart ``(x, u) -> (x, xu)`` the
pull-back divided by ``x^2`` is

    X = Q(x, xu)/x d/dx + (P(x, xu) - u Q(x, xu))/x^2 d/du,

and on the exceptional divisor ``{x = 0}`` it restricts to ``phi(u) d/du``
with the tangent cubic ``phi``.  Holonomy is computed numerically by
integrating ``dx/du = A(x, u) / B(x, u)`` over loops in the ``u``-plane, both
for sample points and, coefficient-wise, for the jet of the holonomy germ.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .calculus import DiffeoGerm, compose, loray_defect
from .coprimality import CoprimalityVerdict, decide_coprime
from .errors import DimensionError, DomainError, NumericError, TruncationError
from .flows import VectorField
from .series import Series

DEFAULT_RTOL = 1e-10
DEFAULT_FIT_DEGREE = 6
DEFAULT_RADII = 8
DEFAULT_ANGLES = 4
LOOP_VERTICES = 64
LOOP_RADIUS_FRACTION = 0.3


class FoliationPair:
    """``(P, Q)`` in two variables with zero linear part.

    ``check_coprime`` runs the rank scan of :func:`decide_coprime` up to
    ``trunc - 1`` and rejects pairs that are not certified coprime.
    """

    def __init__(self, P: Series, Q: Series, check_coprime: bool = True):
        if P.nvars != 2 or Q.nvars != 2:
            raise DimensionError("P and Q must be series in (x, y)")
        for name, s in (("P", P), ("Q", Q)):
            if s.trunc < 2:
                raise TruncationError(f"{name} must be known to order >= 2")
            if any(sum(k) < 2 for k, _ in s.items()):
                raise DomainError(f"{name} must have zero linear part (valuation >= 2)")
        self.P = P
        self.Q = Q
        self.coprimality: CoprimalityVerdict | None = None
        if check_coprime:
            v = decide_coprime([P, Q], min(P.trunc, Q.trunc) - 1)
            self.coprimality = v
            if not v.coprime:
                raise DomainError(f"P and Q are not certified coprime ({v.status})")

    def second_jet(self) -> dict:
        """``{"P20": .., "P11": .., ..., "Q02": ..}``."""
        out = {}
        for name, s in (("P", self.P), ("Q", self.Q)):
            for a, b in ((2, 0), (1, 1), (0, 2)):
                out[f"{name}{a}{b}"] = s.coefficient((a, b))
        return out

    @property
    def is_exact(self) -> bool:
        return self.P.is_exact and self.Q.is_exact


# ---------------------------------------------------------------------------
# blow-up


def _chart_substitution(s: Series, trunc: int) -> Series:
    """``s(x, xu)`` for the stored polynomial ``s``, kept to total degree ``trunc``."""
    x = Series.var(0, 2, trunc)
    xu = x * Series.var(1, 2, trunc)
    return compose(s.with_trunc(trunc), [x, xu])


def _divide_by_x(s: Series, power: int) -> Series:
    c = {}
    for k, v in s.items():
        if k[0] < power:
            raise ArithmeticError("division by a power of x leaves a remainder")
        c[(k[0] - power, k[1])] = v
    return Series(2, s.trunc - power, c)


def blowup_polynomials(f: FoliationPair) -> tuple[Series, Series]:
    """Components ``(A, B)`` of the blown-up field of the stored polynomials.

    Nothing is dropped: the truncation is large enough to hold every term of
    ``A = Q(x, xu)/x`` and ``B = (P(x, xu) - u Q(x, xu))/x^2``.
    """
    deg = max(f.P.trunc, f.Q.trunc)
    big = 2 * deg + 1
    Pb = _chart_substitution(f.P, big)
    Qb = _chart_substitution(f.Q, big)
    u = Series.var(1, 2, big)
    A = _divide_by_x(Qb, 1)
    B = _divide_by_x(Pb - u * Qb, 2)
    return A, B


def blowup_chart_x(f: FoliationPair) -> VectorField:
    """The blown-up field in ``(x, u)``, exact to total degree ``trunc - 2``.

    A coefficient ``x^i u^j`` of ``B`` comes from the degree ``i + 2`` part of
    ``P`` and ``Q``, so it is known when ``i + j <= trunc - 2``.
    """
    N = min(f.P.trunc, f.Q.trunc) - 2
    A, B = blowup_polynomials(f)
    A = Series(2, N, {k: v for k, v in A.items() if sum(k) <= N})
    B = Series(2, N, {k: v for k, v in B.items() if sum(k) <= N})
    return VectorField([A, B])


def tangent_cubic(f: FoliationPair) -> tuple:
    """``(phi_3, phi_2, phi_1, phi_0)``: coefficients of ``phi`` from the cube down."""
    j = f.second_jet()
    return (-j["Q02"], j["P02"] - j["Q11"], j["P11"] - j["Q20"], j["P20"])


def eigen_x_poly(f: FoliationPair) -> tuple:
    """``(Q02, Q11, Q20)``: the polynomial ``lambda_x(u) = Q02 u^2 + Q11 u + Q20``."""
    j = f.second_jet()
    return (j["Q02"], j["Q11"], j["Q20"])


def cubic_discriminant(a, b, c, d):
    """Discriminant of ``a u^3 + b u^2 + c u + d``."""
    return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def discriminant(f: FoliationPair):
    return cubic_discriminant(*tangent_cubic(f))


def _poly_eval(coeffs, u):
    out = 0
    for c in coeffs:
        out = out * u + c
    return out


def _resultant_cubic_quadratic(cubic, quad):
    """Resultant of a cubic and a quadratic through their Sylvester matrix."""
    from .linalg import determinant

    a3, a2, a1, a0 = cubic
    b2, b1, b0 = quad
    rows = [
        [a3, a2, a1, a0, 0],
        [0, a3, a2, a1, a0],
        [b2, b1, b0, 0, 0],
        [0, b2, b1, b0, 0],
        [0, 0, b2, b1, b0],
    ]
    return determinant(rows)


@dataclass(frozen=True)
class RndStarReport:
    member: bool
    violations: list
    discriminant: object
    cubic: tuple

    def __bool__(self):
        return self.member


def rnd_star_test(f: FoliationPair) -> RndStarReport:
    """The algebraic conditions on the second jet, checked exactly when possible.

    Violations are reported by name: ``Q02 = 0`` (dicritic risk),
    ``P20 = 0`` (singular point at ``u = 0``), ``discriminant = 0`` (repeated
    root) and ``lambda_x = 0`` (an eigenvalue ``Q02 u^2 + Q11 u + Q20``
    vanishes at a root of ``phi``).
    """
    cubic = tangent_cubic(f)
    j = f.second_jet()
    exact = f.is_exact
    zero = (lambda v: v == 0) if exact else (lambda v: abs(complex(v)) < 1e-12)
    violations = []
    if zero(j["Q02"]):
        violations.append("Q02 = 0: the foliation may be dicritic and phi is not a cubic")
    if zero(j["P20"]):
        violations.append("P20 = 0: u = 0 is a singular point")
    disc = cubic_discriminant(*cubic)
    if zero(disc):
        violations.append("discriminant = 0: phi has a repeated root")
    if not zero(j["Q02"]):
        res = _resultant_cubic_quadratic(cubic, eigen_x_poly(f)) if exact else \
            np.prod([_poly_eval(eigen_x_poly(f), r) for r in np.roots([complex(c) for c in cubic])])
        if zero(res):
            violations.append("lambda_x = 0 at a root of phi: an eigenvalue vanishes")
    return RndStarReport(not violations, violations, disc, cubic)


@dataclass(frozen=True)
class SingularPoint:
    u: complex
    lambda_x: complex
    lambda_u: complex

    @property
    def ratio(self) -> complex:
        return self.lambda_x / self.lambda_u

    @property
    def multiplier(self) -> complex:
        """``exp(2 i pi lambda_x / lambda_u)``, the linear part of the local holonomy."""
        return cmath.exp(2j * math.pi * self.ratio)


def singular_data(f: FoliationPair, newton_steps: int = 4) -> list[SingularPoint]:
    """Roots of ``phi`` with the eigenvalues of the linear part there.

    Sorted by real part, then imaginary part.
    """
    report = rnd_star_test(f)
    if not report.member:
        raise DomainError("not in RND*: " + "; ".join(report.violations))
    cubic = [complex(c) for c in report.cubic]
    dcubic = [3 * cubic[0], 2 * cubic[1], cubic[2]]
    roots = np.roots(cubic)
    out = []
    for r in roots:
        r = complex(r)
        for _ in range(newton_steps):
            d = _poly_eval(dcubic, r)
            if d == 0:
                break
            r = r - _poly_eval(cubic, r) / d
        res = abs(_poly_eval(cubic, r))
        scale = max(abs(c) for c in cubic) * max(1.0, abs(r)) ** 3
        if res > 1e-9 * scale:
            raise NumericError(f"root {r} of phi not resolved (residual {res:.3g})")
        lam_x = _poly_eval([complex(c) for c in eigen_x_poly(f)], r)
        lam_u = _poly_eval(dcubic, r)
        out.append(SingularPoint(r, lam_x, lam_u))
    out.sort(key=lambda s: (round(s.u.real, 12), round(s.u.imag, 12)))
    return out


# ---------------------------------------------------------------------------
# loops


@dataclass(frozen=True)
class LoopSpec:
    """A closed polygon in the ``u``-plane starting and ending at ``vertices[0]``."""

    vertices: tuple
    label: str = ""

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("a loop needs at least three vertices")
        if abs(self.vertices[0] - self.vertices[-1]) > 1e-14 * max(1.0, abs(self.vertices[0])):
            raise ValueError("a loop must end where it starts")

    @property
    def base(self) -> complex:
        return self.vertices[0]

    def segments(self):
        return list(zip(self.vertices[:-1], self.vertices[1:]))

    def then(self, other: "LoopSpec") -> "LoopSpec":
        """Travel ``self`` first, then ``other``."""
        if abs(self.base - other.base) > 1e-14 * max(1.0, abs(self.base)):
            raise ValueError("loops must share their base point")
        label = f"{self.label}.{other.label}" if self.label and other.label else ""
        return LoopSpec(tuple(self.vertices) + tuple(other.vertices[1:]), label)

    def reversed(self) -> "LoopSpec":
        return LoopSpec(tuple(reversed(self.vertices)), f"{self.label}^-1" if self.label else "")

    def refined(self, factor: int) -> "LoopSpec":
        """Same path with every segment split into ``factor`` pieces."""
        vs = [self.vertices[0]]
        for a, b in self.segments():
            vs += [a + (b - a) * k / factor for k in range(1, factor + 1)]
        return LoopSpec(tuple(vs), self.label)

    def distance_to(self, point: complex) -> float:
        best = math.inf
        for a, b in self.segments():
            ab = b - a
            t = 0.0 if ab == 0 else max(0.0, min(1.0, ((point - a) * ab.conjugate()).real / abs(ab) ** 2))
            best = min(best, abs(a + t * ab - point))
        return best

    def winding_number(self, point: complex) -> int:
        total = 0.0
        for a, b in self.segments():
            total += cmath.phase((b - point) / (a - point))
        return round(total / (2 * math.pi))

    @classmethod
    def circle(cls, center: complex, radius: float, n: int = LOOP_VERTICES, start_angle: float = 0.0,
               label: str = "") -> "LoopSpec":
        """Counterclockwise polygonal circle based at ``center + radius e^{i start_angle}``."""
        vs = [center + radius * cmath.exp(1j * (start_angle + 2 * math.pi * k / n)) for k in range(n)]
        vs.append(vs[0])
        return cls(tuple(vs), label)

    @classmethod
    def lollipop(cls, base: complex, center: complex, radius: float, n: int = LOOP_VERTICES,
                 label: str = "") -> "LoopSpec":
        """Straight to the circle around ``center``, once around counterclockwise, and back."""
        d = base - center
        if abs(d) <= radius:
            raise ValueError("base point lies on or inside the circle")
        angle = cmath.phase(d)
        anchor = center + radius * cmath.exp(1j * angle)
        ring = [center + radius * cmath.exp(1j * (angle + 2 * math.pi * k / n)) for k in range(n + 1)]
        ring[-1] = anchor
        return cls((base,) + tuple(ring) + (base,), label)


def _min_root_distance(points: list[SingularPoint]) -> float:
    us = [p.u for p in points]
    return min(abs(a - b) for i, a in enumerate(us) for b in us[i + 1:])


def _loop_margin(loop: LoopSpec, roots) -> float:
    return min(loop.distance_to(r) for r in roots)


def linear_growth(loop: LoopSpec, points: list[SingularPoint], refine: int = 8) -> float:
    """``max |x(u)| / |x(base)|`` along ``loop`` for the linear part of the transport.

    On the divisor ``dx/du = x lambda_x(u)/phi(u)``, and ``lambda_x/phi`` has
    simple poles with residues ``lambda_x(u_j)/phi'(u_j)``, so
    ``log|x|`` is ``Re sum_j r_j log(u - u_j)`` up to a constant.
    """
    res = [p.ratio for p in points]
    roots = [p.u for p in points]
    vs = loop.refined(refine).vertices
    args = [cmath.phase(vs[0] - r) for r in roots]
    logmod0 = [math.log(abs(vs[0] - r)) for r in roots]
    best = 0.0
    prev = vs[0]
    for v in vs[1:]:
        for j, r in enumerate(roots):
            args[j] += cmath.phase((v - r) / (prev - r))
        val = sum(rj.real * (math.log(abs(v - r)) - l0) - rj.imag * (aj - cmath.phase(vs[0] - r))
                  for rj, r, l0, aj in zip(res, roots, logmod0, args))
        best = max(best, val)
        prev = v
    return math.exp(best)


def generator_loops(points: list[SingularPoint], base: complex | None = None,
                    n: int = LOOP_VERTICES) -> list[LoopSpec]:
    """One lollipop per singular point, all based at ``base``.

    Without a given base point, candidates around the roots (``u = 0`` first)
    are screened for loops that keep clear of the other roots, and the one
    with the least linear growth of ``|x|`` along the loops is kept.  ``u = 0``
    is preferred unless its growth is more than twice the best.
    """
    dmin = _min_root_distance(points)
    radius = LOOP_RADIUS_FRACTION * dmin
    roots = [p.u for p in points]

    def build(b):
        return [LoopSpec.lollipop(b, p.u, radius, n, label=f"around:{j}") for j, p in enumerate(points)]

    def ok(loops):
        for j, loop in enumerate(loops):
            others = [r for i, r in enumerate(roots) if i != j]
            if _loop_margin(loop, others) < 0.5 * radius:
                return False
            if abs(loop.winding_number(roots[j])) != 1:
                return False
        return True

    if base is not None:
        loops = build(base)
        if not ok(loops):
            raise DomainError(f"base point {base} gives loops passing too close to singular points")
        return loops
    center = sum(roots) / len(roots)
    step = (max(abs(r - center) for r in roots) + dmin) / 4
    candidates = [0j] + [center + step * complex(a, b) for a in range(-8, 9) for b in range(-8, 9)]
    scored = []
    for b in candidates:
        if min(abs(b - r) for r in roots) <= 2 * radius:
            continue
        loops = build(b)
        if ok(loops):
            scored.append((max(linear_growth(L, points) for L in loops), b, loops))
    if not scored:
        raise DomainError("no base point found with clear loops")
    best = min(scored, key=lambda t: t[0])
    if scored[0][1] == 0 and scored[0][0] <= 2 * best[0]:
        return scored[0][2]
    return best[2]


def product_loop(loops: list[LoopSpec]) -> LoopSpec:
    """The generators travelled in turn so that the product encircles every root once.

    Seen from the base point, the anchors are taken by increasing argument,
    starting after the widest angular gap between them.
    """
    base = loops[0].base
    angles = sorted((cmath.phase(loop.vertices[1] - base), i) for i, loop in enumerate(loops))
    gaps = [(angles[(k + 1) % len(angles)][0] - angles[k][0]) % (2 * math.pi) for k in range(len(angles))]
    start = (max(range(len(gaps)), key=gaps.__getitem__) + 1) % len(angles)
    order = [angles[(start + k) % len(angles)][1] for k in range(len(angles))]
    out = loops[order[0]]
    for i in order[1:]:
        out = out.then(loops[i])
    return out


# ---------------------------------------------------------------------------
# numerical transport


class _BlownEvaluator:
    """``A`` and ``B`` as polynomials in ``x`` with coefficient polynomials in ``u``."""

    def __init__(self, f: FoliationPair):
        A, B = blowup_polynomials(f)
        self.a = self._collect(A)
        self.b = self._collect(B)
        self.roots = None

    @staticmethod
    def _collect(s: Series) -> list[np.ndarray]:
        deg_x = max((k[0] for k, _ in s.items()), default=0)
        out = []
        for i in range(deg_x + 1):
            terms = {k[1]: complex(v) for k, v in s.items() if k[0] == i}
            deg_u = max(terms, default=0)
            out.append(np.array([terms.get(j, 0j) for j in range(deg_u, -1, -1)], dtype=complex))
        return out

    def coeffs_at(self, u: complex) -> tuple[np.ndarray, np.ndarray]:
        a = np.array([np.polyval(c, u) for c in self.a])
        b = np.array([np.polyval(c, u) for c in self.b])
        return a, b

    def slope(self, x: np.ndarray, u: complex) -> np.ndarray:
        a, b = self.coeffs_at(u)
        return np.polyval(a[::-1], x) / np.polyval(b[::-1], x)

    def slope_series(self, u: complex, order: int) -> np.ndarray:
        """Coefficients ``f_0..f_order`` of ``A/B`` expanded in ``x`` at fixed ``u``."""
        a, b = self.coeffs_at(u)
        a = np.concatenate([a, np.zeros(max(0, order + 1 - len(a)), complex)])[: order + 1]
        b = np.concatenate([b, np.zeros(max(0, order + 1 - len(b)), complex)])[: order + 1]
        if b[0] == 0:
            raise NumericError(f"the loop meets a singular point at u = {u}")
        q = np.zeros(order + 1, complex)
        for n in range(order + 1):
            q[n] = (a[n] - np.dot(q[:n], b[n:0:-1])) / b[0]
        return q


def _truncated_mul(p: np.ndarray, q: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(p, q)[: order + 1]


def _nearest_singular(u: complex, roots) -> str:
    if not roots:
        return ""
    r = min(roots, key=lambda r: abs(r - u))
    return f"; nearest singular point u = {r:.6g} at distance {abs(r - u):.3g}"


def _transport(rhs, y0: np.ndarray, loop: LoopSpec, rtol: float, atol: float, roots,
               track: list | None = None) -> np.ndarray:
    """Integrate along each segment; ``track`` receives the largest ``|y_i|`` met on the way."""
    y = np.asarray(y0, dtype=complex)
    peak = np.abs(y)
    for a, b in loop.segments():
        if a == b:
            continue
        sol = solve_ivp(lambda s, yy: rhs(yy, a + s * (b - a), b - a), (0.0, 1.0), y,
                        method="DOP853", rtol=rtol, atol=atol)
        if not sol.success:
            raise NumericError(f"integration failed on segment {a:.6g} -> {b:.6g}: {sol.message}"
                               + _nearest_singular(a, roots))
        y = sol.y[:, -1]
        peak = np.maximum(peak, np.max(np.abs(sol.y), axis=1))
    if track is not None:
        track.append(peak)
    return y


def _check_loop(loop: LoopSpec, points: list[SingularPoint], margin: float | None):
    if not points:
        return
    roots = [p.u for p in points]
    if margin is None:
        margin = 0.1 * _min_root_distance(points)
    got = _loop_margin(loop, roots)
    if got < margin:
        raise DomainError(f"loop passes within {got:.3g} of a singular point (margin {margin:.3g})")


def transport_samples(f: FoliationPair, loop: LoopSpec, x_in, rtol: float = DEFAULT_RTOL,
                      margin: float | None = None, track: list | None = None) -> np.ndarray:
    """End points of the leaves through ``(x, base)`` after following ``loop``."""
    points = singular_data(f)
    _check_loop(loop, points, margin)
    ev = _BlownEvaluator(f)
    x_in = np.asarray(x_in, dtype=complex)
    atol = 1e-6 * rtol * float(np.min(np.abs(x_in)))
    return _transport(lambda y, u, du: du * ev.slope(y, u), x_in, loop, rtol, atol,
                      [p.u for p in points], track)


def holonomy_jet(f: FoliationPair, loop: LoopSpec, order: int = 10, rtol: float = DEFAULT_RTOL,
                 margin: float | None = None) -> DiffeoGerm:
    """Jet of the holonomy germ, transporting its coefficients along ``loop``.

    Writing ``x(u) = sum_k c_k(u) x_0^k``, the coefficients solve
    ``c' = sum_j f_j(u) c^j`` truncated at ``order``, where ``A/B = sum_j f_j x^j``.
    """
    points = singular_data(f)
    _check_loop(loop, points, margin)
    ev = _BlownEvaluator(f)

    def rhs(c, u, du):
        fs = ev.slope_series(u, order)
        p = np.concatenate([[0j], c])
        total = np.zeros(order + 1, complex)
        power = np.zeros(order + 1, complex)
        power[0] = 1
        for j in range(1, order + 1):
            power = _truncated_mul(power, p, order)
            if fs[j] != 0:
                total += fs[j] * power
        return du * total[1:]

    c0 = np.zeros(order, complex)
    c0[0] = 1
    c = _transport(rhs, c0, loop, rtol, 1e-6 * rtol, [p.u for p in points])
    coeffs = [complex(v) for v in c]
    return DiffeoGerm.from_coefficients(coeffs, order)


@dataclass(frozen=True)
class HolonomyGerm:
    """Holonomy of a loop measured on the transversal ``{u = base}``."""

    loop: LoopSpec
    samples: list
    fitted: DiffeoGerm
    residual: float
    tolerance: float
    fit_degree: int
    radius: float

    @property
    def low_confidence(self) -> bool:
        return self.residual > self.tolerance

    @property
    def multiplier(self) -> complex:
        return complex(self.fitted.multiplier)

    def max_displacement(self) -> float:
        """``max |x_out - x_in|`` over the samples."""
        return max(abs(b - a) for a, b in self.samples)


def sample_points(radius: float = 1e-2, radii: int = DEFAULT_RADII, angles: int = DEFAULT_ANGLES,
                  decades: float = 2.0) -> np.ndarray:
    rs = np.logspace(math.log10(radius) - decades, math.log10(radius), radii)
    th = 2 * math.pi * (np.arange(angles) + 0.125) / angles
    return (rs[:, None] * np.exp(1j * th)[None, :]).ravel()


def fit_germ(x_in: np.ndarray, x_out: np.ndarray, degree: int) -> tuple[DiffeoGerm, float]:
    """Least squares ``x_out ~ sum_{k=1..degree} c_k x_in^k``; returns the germ and max deviation."""
    x_in = np.asarray(x_in, complex)
    x_out = np.asarray(x_out, complex)
    scale = float(np.max(np.abs(x_in)))
    V = np.stack([(x_in / scale) ** k for k in range(1, degree + 1)], axis=1)
    sol, *_ = np.linalg.lstsq(V, x_out, rcond=None)
    resid = float(np.max(np.abs(V @ sol - x_out)))
    coeffs = [complex(sol[k - 1]) / scale ** k for k in range(1, degree + 1)]
    if coeffs[0] == 0:
        raise NumericError("fitted holonomy has a vanishing linear coefficient")
    return DiffeoGerm.from_coefficients(coeffs, degree), resid


def holonomy(f: FoliationPair, loop: LoopSpec, samples: np.ndarray | None = None,
             fit_degree: int = DEFAULT_FIT_DEGREE, rtol: float = DEFAULT_RTOL,
             tol: float | None = None, margin: float | None = None,
             radius: float = 1e-2, escape: float = 1e-2, min_radius: float = 1e-12) -> HolonomyGerm:
    """Transport sample points around ``loop`` and fit a germ through them.

    Leaves must stay in the disc ``|x| <= escape`` along the whole loop, or
    they may leave the domain of the holonomy germ.  Without explicit
    ``samples`` the sampling radius starts at ``radius`` divided by the linear
    growth along the loop, and shrinks by a decade while a leaf escapes or the
    fit residual exceeds ``tol`` (relative to the radius, ``1e3 * rtol`` by
    default).  With explicit samples an escape makes the result low-confidence.
    """
    rel = 1e3 * rtol if tol is None else tol
    explicit = samples is not None
    points = singular_data(f)
    r = min(radius, escape / linear_growth(loop, points))
    while True:
        xs = np.asarray(samples if explicit else sample_points(r), complex)
        if len(xs) < fit_degree:
            raise ValueError("need at least fit_degree samples")
        peaks: list = []
        out = transport_samples(f, loop, xs, rtol, margin, peaks)
        escaped = float(np.max(peaks[0])) > escape
        germ, resid = fit_germ(xs, out, fit_degree)
        scale = float(np.max(np.abs(xs)))
        result = HolonomyGerm(loop, list(zip(xs.tolist(), out.tolist())), germ,
                              math.inf if escaped else resid, rel * scale, fit_degree, scale)
        if explicit or not result.low_confidence:
            return result
        if r / 10 < min_radius:
            raise NumericError(f"no sampling radius down to {min_radius:g} gives a confident fit")
        r /= 10


# ---------------------------------------------------------------------------
# solvability


def _normalising_scale(germs: list[DiffeoGerm]) -> float:
    """A radius ``rho <= 1`` making ``h(rho x)/rho`` have coefficients of size about 1."""
    growth = 1.0
    for g in germs:
        c = g.coefficients()
        for k in range(2, len(c)):
            if c[k] != 0:
                growth = max(growth, abs(complex(c[k])) ** (1.0 / (k - 1)))
    return 1.0 / growth


def _rescale(g: DiffeoGerm, rho: float) -> DiffeoGerm:
    c = g.coefficients()
    return DiffeoGerm.from_coefficients([complex(c[k]) * rho ** (k - 1) for k in range(1, len(c))], g.trunc)


@dataclass(frozen=True)
class SolvabilityReport:
    """Outcome of the Loray relation on two numerically computed generators.

    ``verdict`` is ``"pass"``, ``"fail"`` or ``"inconclusive"``.  A failure is
    only reported when the defect exceeds ten times its numerical uncertainty.
    """

    verdict: str
    order: int
    failing_degree: int | None
    defect: list
    uncertainty: list
    scale: float
    generators: tuple
    singular_points: list = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return self.verdict == "pass"


def solvability_report(f: FoliationPair, order: int = 10, pair: tuple = (0, 1), rtol: float = DEFAULT_RTOL,
                       base: complex | None = None, floor: float = 1e-7) -> SolvabilityReport:
    """Loray relation ``[h1, [h1, h2 o h2]] = Id`` on the holonomy of two generator loops.

    Generators are computed at ``rtol`` and at ``100 * rtol``; the difference of
    the two defects estimates the numerical uncertainty of each coefficient.
    Coefficients are compared after the common rescaling ``h(rho x)/rho``.
    """
    points = singular_data(f)
    loops = generator_loops(points, base)
    fine = [holonomy_jet(f, loops[j], order, rtol) for j in pair]
    coarse = [holonomy_jet(f, loops[j], order, 100 * rtol) for j in pair]
    rho = _normalising_scale(fine)
    fine_s = [_rescale(g, rho) for g in fine]
    coarse_s = [_rescale(g, rho) for g in coarse]
    d_fine = loray_defect(*fine_s, order)
    d_coarse = loray_defect(*coarse_s, order)
    defect = [complex(d_fine.coefficient((k,))) for k in range(order + 1)]
    unc = [abs(defect[k] - complex(d_coarse.coefficient((k,)))) for k in range(order + 1)]
    verdict, failing = "pass", None
    for k in range(order + 1):
        bound = 10 * unc[k] + floor
        if abs(defect[k]) > bound:
            verdict, failing = "fail", k
            break
        if abs(defect[k]) > floor:
            verdict = "inconclusive"
    return SolvabilityReport(verdict, order, failing, defect, unc, rho, tuple(fine), points)
