"""JSON input parsing and deterministic JSON output.

Inputs: integers and ``"p/q"`` strings are exact, JSON floats are floats.  The
mode of a whole input is decided once (any float among the geometric values
makes it float unless a mode is forced) and every geometric scalar is
converted to it.  Output: fractions become ``"p/q"`` strings, floats are
written with 17 significant digits so they round-trip bit for bit.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from fractions import Fraction
from typing import Any, Iterable, Optional

from .ellipsoid import EllipsoidL2
from .numerics import Mode
from .polygon2d import ConvexPolygon
from .steiner import SteinerPoly
from .zonotope import Parallelotope, Zonotope


class InputError(ValueError):
    """Malformed user input (bad JSON shape, wrong types, missing fields)."""


# --------------------------------------------------------------------------
# scalars


def raw_scalars(obj) -> Iterable:
    """Every number or numeric string inside a nested JSON value."""
    if isinstance(obj, bool) or obj is None:
        return
    if isinstance(obj, (int, float, str)):
        yield obj
    elif isinstance(obj, dict):
        for k, v in obj.items():
            if k not in ("type", "dim"):
                yield from raw_scalars(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            yield from raw_scalars(v)


def detect_mode(values: Iterable) -> Mode:
    return Mode.FLOAT if any(isinstance(v, float) for v in values) else Mode.EXACT


def parse_scalar(x, mode: Mode):
    if isinstance(x, bool):
        raise InputError("booleans are not numbers")
    if isinstance(x, str):
        try:
            val = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad number {x!r}") from exc
    elif isinstance(x, int):
        val = Fraction(x)
    elif isinstance(x, float):
        if not math.isfinite(x):
            raise InputError("numbers must be finite")
        val = x
    else:
        raise InputError(f"expected a number, got {type(x).__name__}")
    return Fraction(val) if mode is Mode.EXACT else float(val)


def parse_vector(x, mode: Mode) -> tuple:
    if not isinstance(x, (list, tuple)) or not x:
        raise InputError("expected a non-empty list of numbers")
    return tuple(parse_scalar(c, mode) for c in x)


def parse_vectors(x, mode: Mode, allow_empty: bool = True) -> tuple:
    if not isinstance(x, (list, tuple)) or (not x and not allow_empty):
        raise InputError("expected a list of vectors")
    vs = tuple(parse_vector(v, mode) for v in x)
    if len({len(v) for v in vs}) > 1:
        raise InputError("vectors have different dimensions")
    return vs


# --------------------------------------------------------------------------
# geometry


def _field(obj: dict, key: str):
    if not isinstance(obj, dict):
        raise InputError(f"expected an object with field {key!r}")
    if key not in obj:
        raise InputError(f"missing field {key!r}")
    return obj[key]


def _check_type(obj, expected: str):
    t = obj.get("type", expected) if isinstance(obj, dict) else None
    if t != expected:
        raise InputError(f"expected type {expected!r}, got {t!r}")


def parse_zonotope(obj, mode: Mode) -> Zonotope:
    _check_type(obj, "zonotope")
    gens = parse_vectors(_field(obj, "generators"), mode)
    dim = obj.get("dim", len(gens[0]) if gens else None)
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError("zonotope needs an integer 'dim'")
    try:
        return Zonotope(dim, gens)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def parse_polygon(obj, mode: Mode) -> ConvexPolygon:
    _check_type(obj, "polygon")
    try:
        return ConvexPolygon(parse_vectors(_field(obj, "vertices"), mode, allow_empty=False))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def parse_ellipsoid(obj, mode: Mode) -> EllipsoidL2:
    _check_type(obj, "ellipsoid")
    cols = parse_vectors(_field(obj, "gen_matrix"), mode)
    dim = obj.get("dim", len(cols[0]) if cols else None)
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError("ellipsoid needs an integer 'dim'")
    try:
        return EllipsoidL2(dim, cols)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def parse_parallelotope(obj, mode: Mode) -> Parallelotope:
    _check_type(obj, "parallelotope")
    try:
        return Parallelotope(parse_vector(_field(obj, "base"), mode), parse_vectors(_field(obj, "edges"), mode))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


# --------------------------------------------------------------------------
# output


def to_jsonable(obj) -> Any:
    """Plain JSON-shaped data (fractions become strings, dataclasses become dicts)."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (int, float)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Zonotope):
        return {"type": "zonotope", "dim": obj.dim, "generators": to_jsonable(obj.generators)}
    if isinstance(obj, ConvexPolygon):
        return {"type": "polygon", "vertices": to_jsonable(obj.vertices)}
    if isinstance(obj, EllipsoidL2):
        return {"type": "ellipsoid", "dim": obj.dim, "gen_matrix": to_jsonable(obj.columns)}
    if isinstance(obj, Parallelotope):
        return {"type": "parallelotope", "base": to_jsonable(obj.base), "edges": to_jsonable(obj.edges)}
    if isinstance(obj, SteinerPoly):
        return to_jsonable(obj.coeffs)
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):  # numpy scalars and arrays
        return to_jsonable(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _escape(s: str) -> str:
    import json

    return json.dumps(s, ensure_ascii=False)


def _write(obj, out: list, indent: Optional[int], level: int) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(_escape(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            if indent is not None:
                out.append("\n" + " " * (indent * (level + 1)))
            out.append(_escape(k) + (": " if indent is not None else ":"))
            _write(v, out, indent, level + 1)
        if indent is not None:
            out.append("\n" + " " * (indent * level))
        out.append("}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        flat = indent is None or all(not isinstance(v, (dict, list)) for v in obj)
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", " if flat and indent is not None else ",")
            if not flat:
                out.append("\n" + " " * (indent * (level + 1)))
            _write(v, out, indent, level + 1)
        if not flat:
            out.append("\n" + " " * (indent * level))
        out.append("]")
    else:
        raise TypeError(f"not JSON data: {type(obj).__name__}")


def dumps(obj, indent: Optional[int] = None) -> str:
    """Deterministic JSON text; floats with 17 significant digits."""
    out: list[str] = []
    _write(to_jsonable(obj), out, indent, 0)
    return "".join(out)
