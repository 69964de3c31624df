"""JSON documents for series and deterministic report emission.

A series document looks like::

    {"vars": ["x", "y"], "trunc": 6,
     "terms": [{"exp": [2, 0], "re": "-1", "im": "0"}, ...]}

Exact coefficients are rational strings ``"p/q"``; approximate ones are JSON
numbers.  Terms are written in lexicomogeneous order and floats with 17
significant digits, so equal inputs give byte-identical output.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import IO

from .errors import GermError
from .series import GaussianRational, Series, make_exact


class ParseError(GermError, ValueError):
    """A document does not describe a valid object."""


def _parse_rational(text, where: str) -> Fraction:
    if isinstance(text, bool):
        raise ParseError(f"{where}: booleans are not coefficients")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: bad rational string {text!r}") from None
    raise ParseError(f"{where}: expected an integer or a rational string, got {text!r}")


def _parse_part(value, where: str, approx: bool):
    if isinstance(value, float):
        if not approx:
            raise ParseError(f"{where}: float {value!r} in exact mode; write it as a rational string")
        return value
    q = _parse_rational(value, where)
    return float(q) if approx else q


def series_from_dict(doc: dict, mode: str = "exact") -> Series:
    """Build a :class:`Series` from a parsed document.

    ``mode="approx"`` turns every coefficient into a complex number; in exact
    mode JSON floats are rejected.
    """
    if mode not in ("exact", "approx"):
        raise ParseError(f"unknown scalar mode {mode!r}")
    if not isinstance(doc, dict):
        raise ParseError("a series document must be a JSON object")
    for key in ("vars", "trunc", "terms"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    names = doc["vars"]
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise ParseError("'vars' must be a nonempty list of names")
    trunc = doc["trunc"]
    if isinstance(trunc, bool) or not isinstance(trunc, int) or trunc < 0:
        raise ParseError("'trunc' must be a nonnegative integer")
    approx = mode == "approx"
    coeffs: dict = {}
    for i, term in enumerate(doc["terms"]):
        where = f"term {i}"
        if not isinstance(term, dict) or "exp" not in term:
            raise ParseError(f"{where}: expected an object with 'exp'")
        exp = term["exp"]
        if (not isinstance(exp, list) or len(exp) != len(names)
                or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exp)):
            raise ParseError(f"{where}: 'exp' must list {len(names)} nonnegative integers")
        if sum(exp) > trunc:
            raise ParseError(f"{where}: degree {sum(exp)} exceeds trunc {trunc}")
        re = _parse_part(term.get("re", 0), where, approx)
        im = _parse_part(term.get("im", 0), where, approx)
        c = complex(re, im) if approx else make_exact(re, im)
        key = tuple(exp)
        if key in coeffs:
            raise ParseError(f"{where}: exponent {exp} appears twice")
        coeffs[key] = c
    return Series(len(names), trunc, coeffs)


def _load(source) -> object:
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from None
    else:
        text = source.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None


def parse_series(source: str | Path | IO, mode: str = "exact") -> Series:
    """Read a series document from a path or an open stream."""
    return series_from_dict(_load(source), mode)


def parse_series_list(source, mode: str = "exact") -> list[Series]:
    """A document holding ``{"components": [...]}``, a JSON list, or a single series."""
    doc = _load(source)
    if isinstance(doc, dict) and "components" in doc:
        doc = doc["components"]
    if isinstance(doc, list):
        return [series_from_dict(d, mode) for d in doc]
    return [series_from_dict(doc, mode)]


def default_names(nvars: int) -> list[str]:
    if nvars == 1:
        return ["z"]
    if nvars == 2:
        return ["x", "y"]
    return [f"z{j}" for j in range(nvars)]


def scalar_parts(c) -> tuple:
    """``(re, im)`` as rational strings for exact scalars, floats otherwise."""
    if isinstance(c, GaussianRational):
        return str(c.re), str(c.im)
    if isinstance(c, (int, Fraction)):
        return str(Fraction(c)), "0"
    c = complex(c)
    return c.real, c.imag


def series_to_dict(f: Series, names: list[str] | None = None) -> dict:
    names = names or default_names(f.nvars)
    if len(names) != f.nvars:
        raise ValueError("one name per variable is required")
    terms = []
    for k, v in f.items():
        re, im = scalar_parts(v)
        terms.append({"exp": list(k), "re": re, "im": im})
    return {"vars": list(names), "trunc": f.trunc, "terms": terms}


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: keys keep insertion order, floats use 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, complex):
        return dumps({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, Fraction)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, GaussianRational):
        return dumps({"re": str(obj.re), "im": str(obj.im)}, indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_text(obj, _level: int = 0) -> str:
    """Indented human-readable rendering of a report (not meant to be parsed back)."""
    pad = "  " * _level
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, _level + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(to_text(v, _level + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(pad + _inline(obj))
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    if isinstance(v, dict):
        return set(v) <= {"re", "im"}
    return True


def _inline(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, dict) and set(v) <= {"re", "im"}:
        re, im = v.get("re", 0), v.get("im", 0)
        return f"{_inline(re)} + {_inline(im)}i" if im not in (0, "0", 0.0) else _inline(re)
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    return str(v)
