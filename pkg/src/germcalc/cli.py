"""Command line front end: ``germcalc <subcommand> ...``.

Every subcommand writes one report (JSON by default) that embeds the
configuration it ran with.  Exit status is 0 on success, 2 for invalid input
or domain errors and 3 when a numerical procedure cannot reach confidence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import calculus, coprimality, flows, foliation, norms
from .errors import GermError, InconclusiveError, NumericError
from .io import ParseError, dumps, parse_series, parse_series_list, series_to_dict, to_text
from .series import Series

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3

SUBCOMMANDS = ("norm", "dconst", "compose", "invert", "solvable2", "coprime", "flow", "odesolve", "foliation")


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    mode: str | None = None
    format: str = "json"
    out: str | None = None
    order: int | None = None
    dmax: int | None = None
    milnor: int | None = None
    alpha: str | None = None
    beta: str | None = None
    k: int | None = None
    jet: str | None = None
    action: str | None = None
    loop: str | None = None
    fit_degree: int = foliation.DEFAULT_FIT_DEGREE
    tol: float | None = None
    rtol: float = foliation.DEFAULT_RTOL

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ParseError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in ("json", "text"):
            raise ParseError(f"unknown format {self.format!r}")
        if self.mode not in (None, "exact", "approx"):
            raise ParseError(f"unknown mode {self.mode!r}")
        if self.order is not None and self.order < 1:
            raise ParseError("--order must be at least 1")
        for name in ("tol", "rtol"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ParseError(f"--{name} must be positive")
        if self.subcommand == "foliation" and self.action in ("holonomy", "solvability"):
            if self.mode == "exact":
                raise ParseError("holonomy is numerical; exact mode is not available")
        return self

    @property
    def scalar_mode(self) -> str:
        return self.mode or "exact"


# ---------------------------------------------------------------------------
# report helpers


def _scalar(c):
    if isinstance(c, complex):
        return {"re": c.real, "im": c.imag} if c.imag else c.real
    if isinstance(c, float):
        return c
    if isinstance(c, (int, Fraction)):
        return str(Fraction(c))
    return str(c)


def _number(text: str):
    """Integers and fractions stay exact; anything else becomes a float."""
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {text!r}") from None
    if q.denominator == 1:
        return int(q)
    return q if "/" in text else float(q)


def _require(cfg: RunConfig, count: int | None = None, at_least: int | None = None):
    n = len(cfg.inputs)
    if count is not None and n != count:
        raise ParseError(f"{cfg.subcommand} expects {count} input file(s), got {n}")
    if at_least is not None and n < at_least:
        raise ParseError(f"{cfg.subcommand} expects at least {at_least} input files, got {n}")


def _load(cfg: RunConfig, i: int) -> Series:
    return parse_series(cfg.inputs[i], cfg.scalar_mode)


def _jet(f: Series, order: int | None) -> Series:
    return f if order is None else f.jet(order)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_norm(cfg: RunConfig) -> dict:
    _require(cfg, 1)
    if cfg.alpha is None:
        raise ParseError("norm needs --alpha")
    f = _load(cfg, 0)
    a = norms.WeightSequence.factorial(_number(cfg.alpha))
    rep = norms.a_norm(f, a)
    rad = norms.radius_bounds(f) if f.trunc >= 1 else None
    out = {"norm": _scalar(rep.value), "truncation_order": rep.truncation_order,
           "is_lower_bound": rep.is_lower_bound}
    if rad is not None:
        out["radius"] = {"lower": rad.lower, "upper": rad.upper, "window": list(rad.window),
                         "unbounded": rad.unbounded, "certified": rad.certified}
    return out


def _cmd_dconst(cfg: RunConfig) -> dict:
    if cfg.k is None or cfg.alpha is None or cfg.beta is None:
        raise ParseError("dconst needs -k, --alpha and --beta")
    d = norms.deriv_constant(cfg.k, float(_number(cfg.alpha)), float(_number(cfg.beta)))
    return {"D": d.value, "log_D": d.log_value, "argmax": d.argmax, "r": d.r,
            "equality_monomial_degree": d.argmax + d.k}


def _cmd_compose(cfg: RunConfig) -> dict:
    _require(cfg, 2)
    f = _load(cfg, 0)
    gs = parse_series_list(cfg.inputs[1], cfg.scalar_mode)
    h = calculus.compose(_jet(f, cfg.order), [_jet(g, cfg.order) for g in gs])
    return {"result": series_to_dict(h)}


def _cmd_invert(cfg: RunConfig) -> dict:
    _require(cfg, 1)
    d = calculus.DiffeoGerm(_jet(_load(cfg, 0), cfg.order))
    return {"result": series_to_dict(d.inverse().series)}


def _cmd_solvable2(cfg: RunConfig) -> dict:
    _require(cfg, 2)
    f = calculus.DiffeoGerm(_load(cfg, 0))
    g = calculus.DiffeoGerm(_load(cfg, 1))
    order = cfg.order or min(f.trunc, g.trunc)
    chk = calculus.solvable2_test(f, g, order, cfg.tol)
    return {"passes": chk.passes, "order": chk.order, "failing_degree": chk.failing_degree,
            "certified": chk.certified, "note": str(chk), "tolerance": chk.tolerance,
            "defect": series_to_dict(chk.defect)}


def _cmd_coprime(cfg: RunConfig) -> dict:
    _require(cfg, at_least=2)
    fs = [_load(cfg, i) for i in range(len(cfg.inputs))]
    v = coprimality.decide_coprime(fs, cfg.dmax)
    out = {"status": v.status, "witness_d": v.witness_d,
           "ranks": [{"d": r.d, "rank": r.rank, "bound": r.bound, "kernel": r.kernel} for r in v.ranks]}
    if v.reason:
        out["reason"] = v.reason
    if cfg.milnor is not None:
        m = coprimality.milnor_dim_estimate(fs, cfg.milnor)
        out["milnor"] = {"dimension": m.dimension, "order": m.order, "stabilized": m.stabilized,
                         "previous": m.previous}
    return out


def _cmd_flow(cfg: RunConfig) -> dict:
    _require(cfg, 1)
    X = flows.VectorField(parse_series_list(cfg.inputs[0], cfg.scalar_mode))
    order = cfg.order or flows.DEFAULT_ORDER
    X = flows.VectorField([c.jet(order) for c in X]) if X.trunc > order else X
    Phi = flows.flow_series(X, order)
    names = ["z"] if X.m == 1 else [f"z{j}" for j in range(X.m)]
    return {"order": order, "variables": names + ["t"],
            "components": [series_to_dict(c, names + ["t"]) for c in Phi.components]}


def _cmd_odesolve(cfg: RunConfig) -> dict:
    _require(cfg, 1)
    if cfg.k is None:
        raise ParseError("odesolve needs -k")
    P = _load(cfg, 0)
    J = parse_series(cfg.jet, cfg.scalar_mode) if cfg.jet else None
    order = cfg.order or flows.DEFAULT_ORDER
    f = flows.ode_solve(J, flows.OdeSpec(cfg.k, P), order)
    return {"order": order, "solution": series_to_dict(f)}


def _singular_report(pts) -> list:
    return [{"u": _scalar(p.u), "lambda_x": _scalar(p.lambda_x), "lambda_u": _scalar(p.lambda_u),
             "ratio": _scalar(p.ratio), "multiplier": _scalar(p.multiplier)} for p in pts]


def _germ_coeffs(g) -> list:
    return [_scalar(complex(c)) for c in g.coefficients()[1:]]


def _cmd_foliation(cfg: RunConfig) -> dict:
    _require(cfg, 2)
    P = parse_series(cfg.inputs[0], "exact")
    Q = parse_series(cfg.inputs[1], "exact")
    f = foliation.FoliationPair(P, Q)
    rep = foliation.rnd_star_test(f)
    out = {"coprimality": {"status": f.coprimality.status, "witness_d": f.coprimality.witness_d},
           "cubic": [_scalar(c) for c in rep.cubic], "discriminant": _scalar(rep.discriminant),
           "rnd_star": rep.member, "violations": rep.violations}
    action = cfg.action or "check"
    if action == "check":
        return out
    pts = foliation.singular_data(f)
    out["singular_points"] = _singular_report(pts)
    if action == "singular":
        return out
    loops = foliation.generator_loops(pts)
    out["base_point"] = _scalar(loops[0].base)
    if action == "holonomy":
        spec = cfg.loop or "around:0"
        if spec == "product":
            loop = foliation.product_loop(loops)
        elif spec.startswith("around:"):
            try:
                loop = loops[int(spec.split(":", 1)[1])]
            except (ValueError, IndexError):
                raise ParseError(f"bad loop {spec!r}; use around:0, around:1, around:2 or product") from None
        else:
            raise ParseError(f"bad loop {spec!r}; use around:j or product")
        h = foliation.holonomy(f, loop, fit_degree=cfg.fit_degree, rtol=cfg.rtol, tol=cfg.tol)
        if h.low_confidence:
            raise NumericError(f"holonomy fit residual {h.residual:.3g} above tolerance {h.tolerance:.3g}")
        out["holonomy"] = {"loop": loop.label, "sampling_radius": h.radius, "fit_degree": h.fit_degree,
                           "residual": h.residual, "tolerance": h.tolerance,
                           "coefficients": _germ_coeffs(h.fitted), "multiplier": _scalar(h.multiplier)}
        return out
    if action == "solvability":
        r = foliation.solvability_report(f, cfg.order or 10, rtol=cfg.rtol)
        out["solvability"] = {"verdict": r.verdict, "order": r.order, "failing_degree": r.failing_degree,
                              "scale": r.scale, "defect": [_scalar(c) for c in r.defect],
                              "uncertainty": r.uncertainty,
                              "generators": [_germ_coeffs(g) for g in r.generators]}
        if r.verdict == "inconclusive":
            raise InconclusiveError("solvability defect below its numerical uncertainty")
        return out
    raise ParseError(f"unknown foliation action {action!r}")


_DISPATCH = {
    "norm": _cmd_norm, "dconst": _cmd_dconst, "compose": _cmd_compose, "invert": _cmd_invert,
    "solvable2": _cmd_solvable2, "coprime": _cmd_coprime, "flow": _cmd_flow,
    "odesolve": _cmd_odesolve, "foliation": _cmd_foliation,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute a configuration; returns the exit status and the report."""
    report = {"command": cfg.subcommand, "config": asdict(cfg)}
    try:
        cfg.validate()
        report["result"] = _DISPATCH[cfg.subcommand](cfg)
        status = EXIT_OK
    except (NumericError, InconclusiveError) as exc:
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        status = EXIT_NUMERIC
    except (GermError, ValueError, ZeroDivisionError) as exc:
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        status = EXIT_DOMAIN
    report["status"] = status
    return status, report


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--mode", choices=["exact", "approx"], default=d)
    p.add_argument("--format", choices=["json", "text"], default=d)
    p.add_argument("--out", metavar="PATH", default=d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="germcalc", description="Computations on truncated germs.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        return p

    p = add("norm", "factorial a-norm and radius estimates of a series")
    p.add_argument("--alpha", required=True)
    p.add_argument("--input", dest="inputs", action="append", required=True)

    p = add("dconst", "the constant D_{k,alpha,beta}")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)

    p = add("compose", "composition f o g")
    p.add_argument("inputs", nargs=2)
    p.add_argument("--order", type=int)

    p = add("invert", "compositional inverse of a germ of diffeomorphism")
    p.add_argument("inputs", nargs=1)
    p.add_argument("--order", type=int)

    p = add("solvable2", "jet test of the relation [f, [f, g o g]] = Id")
    p.add_argument("inputs", nargs=2)
    p.add_argument("--order", type=int)
    p.add_argument("--tol", type=float)

    p = add("coprime", "coprimality scan by exact ranks")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--dmax", type=int)
    p.add_argument("--milnor", type=int)

    p = add("flow", "Lie series of the flow of a vector field")
    p.add_argument("inputs", nargs=1)
    p.add_argument("--order", type=int)

    p = add("odesolve", "solution of P(z, f, ..., f^(k)) = 0 through the companion field")
    p.add_argument("inputs", nargs=1)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--jet")
    p.add_argument("--order", type=int)

    p = add("foliation", "blow-up, singular points and holonomy of a ZLP foliation")
    p.add_argument("inputs", nargs=2)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--check", dest="action", action="store_const", const="check")
    g.add_argument("--singular", dest="action", action="store_const", const="singular")
    g.add_argument("--holonomy", dest="action", action="store_const", const="holonomy")
    g.add_argument("--solvability", dest="action", action="store_const", const="solvability")
    p.add_argument("--loop")
    p.add_argument("--fit-degree", dest="fit_degree", type=int, default=foliation.DEFAULT_FIT_DEGREE)
    p.add_argument("--tol", type=float)
    p.add_argument("--rtol", type=float, default=foliation.DEFAULT_RTOL)
    p.add_argument("--order", type=int)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = vars(ns).copy()
    cfg = RunConfig(subcommand=values.pop("subcommand"))
    for key, v in values.items():
        if v is not None and hasattr(cfg, key):
            setattr(cfg, key, v)
    return cfg


def render(report: dict, fmt: str) -> str:
    return (dumps(report) if fmt == "json" else to_text(report)) + "\n"


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    status, report = run(cfg)
    text = render(report, cfg.format if cfg.format in ("json", "text") else "json")
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            sys.stderr.write(f"cannot write {cfg.out}: {exc}\n")
            return EXIT_DOMAIN
    else:
        sys.stdout.write(text)
    if status != EXIT_OK:
        sys.stderr.write(f"germcalc {cfg.subcommand}: {report['error']['message']}\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
