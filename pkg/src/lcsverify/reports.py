"""Report documents and the J file format.

A report is an ordered dict whose values may be forms, rationals, exact or
float matrices, booleans or nested reports. ``render_machine`` gives a JSON
document with rationals as strings and floats as 17-significant-digit strings;
``render_text`` gives an indented ``key: value`` listing.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .acs import AlmostComplexStructure
from .algebra import KForm, ModelError, ModelSyntaxError, form_to_data
from .scalars import GaussianRational, format_scalar, parse_rational


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def _is_float_matrix(m: np.ndarray) -> bool:
    return m.dtype.kind == "f"


def machine_value(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, (Fraction, GaussianRational)):
        return format_scalar(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, KForm):
        return form_to_data(v)
    if isinstance(v, AlmostComplexStructure):
        return machine_value(v.J)
    if isinstance(v, np.ndarray):
        fmt = format_float if _is_float_matrix(v) else format_scalar
        if v.ndim == 1:
            return [fmt(x) for x in v]
        return [[fmt(x) for x in row] for row in v]
    if isinstance(v, dict):
        return {str(k): machine_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [machine_value(x) for x in v]
    raise TypeError(f"cannot serialize {type(v).__name__}")


def render_machine(doc: dict) -> str:
    return json.dumps(machine_value(doc), indent=2, ensure_ascii=False) + "\n"


def _text_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (Fraction, GaussianRational)):
        return format_scalar(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, KForm):
        return str(v)
    return str(v)


def _text_lines(doc: dict, indent: int) -> list[str]:
    pad = "  " * indent
    out = []
    for key, v in doc.items():
        if isinstance(v, AlmostComplexStructure):
            v = v.J
        if isinstance(v, dict):
            out.append(f"{pad}{key}:")
            out.extend(_text_lines(v, indent + 1))
        elif isinstance(v, np.ndarray) and v.ndim == 2:
            out.append(f"{pad}{key}:")
            fmt = format_float if _is_float_matrix(v) else format_scalar
            out.extend(f"{pad}  [{', '.join(fmt(x) for x in row)}]" for row in v)
        elif isinstance(v, (list, tuple, np.ndarray)):
            out.append(f"{pad}{key}: [{', '.join(_text_scalar(x) for x in v)}]")
        else:
            out.append(f"{pad}{key}: {_text_scalar(v)}")
    return out


def render_text(doc: dict, summary: str | None = None) -> str:
    lines = [summary] if summary else []
    lines.extend(_text_lines(doc, 0))
    return "\n".join(lines) + "\n"


# --- J files -----------------------------------------------------------------


def j_from_data(data) -> AlmostComplexStructure:
    if not isinstance(data, dict) or "dim" not in data or "matrix" not in data:
        raise ModelError("J file must be an object with dim and matrix")
    dim = data["dim"]
    rows = data["matrix"]
    if not isinstance(dim, int) or dim < 2:
        raise ModelError("J dim must be an integer >= 2")
    if not isinstance(rows, list) or len(rows) != dim or any(not isinstance(r, list) or len(r) != dim for r in rows):
        raise ModelError(f"J matrix must be {dim}x{dim}")
    try:
        m = np.array([[parse_rational(x) for x in r] for r in rows], dtype=object)
    except ValueError as exc:
        raise ModelError(f"J matrix: {exc}") from None
    return AlmostComplexStructure(m)


def parse_j(text: str) -> AlmostComplexStructure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return j_from_data(data)


def j_to_data(J: AlmostComplexStructure) -> dict:
    return {"dim": J.dim, "matrix": machine_value(J.J)}


def serialize_j(J: AlmostComplexStructure) -> str:
    return json.dumps(j_to_data(J), indent=2) + "\n"
