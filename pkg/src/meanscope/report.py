"""Serialization of detection reports and criterion results.

JSON documents carry ``"schema": "meanscope/1"``. Floats are written with 17
significant digits so every value round-trips exactly; non-finite floats
become ``null``. CSV tables have a header row and LF line endings.
"""

from __future__ import annotations

import dataclasses
import enum
import io
import json
import math
from typing import Any, Iterable, Sequence

from .detector import DetectionReport, RepresentationTable, Verdict
from .expr import GeneratorPair, Interval, unparse

SCHEMA = "meanscope/1"


def format_float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    text = format(v, ".17g")
    # keep the value a JSON float, e.g. "2" -> "2.0"
    if all(ch not in text for ch in ".en"):
        text += ".0"
    return text


def to_jsonable(obj: Any) -> Any:
    """Turn dataclasses, enums, tuples and pairs into plain JSON containers."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if isinstance(obj, GeneratorPair):
        return pair_dict(obj)
    if isinstance(obj, Interval):
        return [obj.lo, obj.hi]
    if isinstance(obj, RepresentationTable):
        return table_summary(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dump(obj: Any, out: list[str], indent: int) -> None:
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}  {json.dumps(key)}: ")
            _dump(value, out, indent + 1)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
        elif all(not isinstance(v, (dict, list)) for v in obj):
            parts: list[str] = []
            for v in obj:
                _dump(v, parts, 0)
                parts.append(", ")
            out.append("[" + "".join(parts[:-1]) + "]")
        else:
            out.append("[\n")
            for k, value in enumerate(obj):
                out.append(pad + "  ")
                _dump(value, out, indent + 1)
                out.append(",\n" if k < len(obj) - 1 else "\n")
            out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _dump(to_jsonable(obj), out, 0)
    return "".join(out) + "\n"


def pair_dict(pair: GeneratorPair) -> dict:
    return {"name": pair.name, "f": unparse(pair.f), "g": unparse(pair.g),
            "interval": [pair.interval.lo, pair.interval.hi]}


def table_summary(table: RepresentationTable) -> dict:
    return {"n_nodes": len(table.xs), "x_range": [table.xs[0], table.xs[-1]],
            "h_range": [table.hs[0], table.hs[-1]], "increasing": table.increasing}


def witness_dict(report: DetectionReport) -> dict | None:
    """Concrete evidence behind a NOT or INCONCLUSIVE verdict."""
    out: dict = {}
    if report.regularity.witness is not None:
        out["regularity"] = to_jsonable(report.regularity.witness)
    if report.expression_witness is not None:
        w = report.expression_witness
        out["expression"] = {"x_min": w.x_min, "e_min": w.e_min,
                             "x_max": w.x_max, "e_max": w.e_max, "spread": w.spread}
    if report.bisymmetry_witness is not None:
        b = report.bisymmetry_witness
        out["bisymmetry"] = {"quadruple": list(b.quadruple), "left": b.left,
                             "right": b.right, "deviation": b.deviation}
    if report.verdict is Verdict.NOT_QUASIARITHMETIC and report.conic is not None:
        out["conic_residual"] = report.conic.residual
    return out or None


def report_dict(report: DetectionReport) -> dict:
    profile = None
    if report.profile is not None:
        pr = report.profile
        profile = {"n_points": len(pr.points), "min": pr.min, "max": pr.max,
                   "median": pr.median, "spread": pr.spread, "argmin": pr.argmin,
                   "argmax": pr.argmax, "constancy": pr.constancy,
                   "tol_abs": pr.tol_abs, "tol_rel": pr.tol_rel}
    return {
        "schema": SCHEMA,
        "verdict": report.verdict.value,
        "pair": pair_dict(report.pair),
        "p_estimate": report.p_estimate,
        "equality_max_dev": report.equality_max_dev,
        "criteria": dict(report.criteria),
        "criteria_agreement": report.criteria_agreement,
        "regularity": to_jsonable(report.regularity),
        "profile": profile,
        "conic": to_jsonable(report.conic),
        "quad_form": to_jsonable(report.quad_form),
        "bajraktarevic": to_jsonable(report.bajraktarevic),
        "representation": None if report.table is None else table_summary(report.table),
        "witness": witness_dict(report),
        "notes": list(report.notes),
        "config": dict(to_jsonable(report.config), seed=report.config.resolved_seed()),
    }


def _g(v: float | None) -> str:
    return "n/a" if v is None else format(v, ".6g")


def report_text(report: DetectionReport) -> str:
    lines = [f"verdict: {report.verdict.value}", f"pair: {report.pair.describe()}",
             f"regularity: sampled class C_{report.regularity.class_level}"]
    if report.regularity.witness is not None:
        w = report.regularity.witness
        lines.append(f"  violated {w.violated} at x = {_g(w.point)}")
    for name, vote in report.criteria.items():
        lines.append(f"criterion {name}: {'yes' if vote else 'no'}")
    if report.profile is not None:
        pr = report.profile
        lines.append(f"E: min {_g(pr.min)} at {_g(pr.argmin)}, max {_g(pr.max)} at {_g(pr.argmax)}")
    if report.conic is not None:
        lines.append(f"conic residual: {_g(report.conic.residual)}"
                     f" (nondegenerate: {str(report.conic.nondegenerate).lower()})")
    if report.quad_form is not None:
        lines.append(f"quadratic form residual: {_g(report.quad_form.residual)}")
    if report.p_estimate is not None:
        lines.append(f"p estimate: {_g(report.p_estimate)}")
    if report.equality_max_dev is not None:
        lines.append(f"max |C - A_h|: {_g(report.equality_max_dev)}")
    if report.bisymmetry_witness is not None:
        b = report.bisymmetry_witness
        quad = ", ".join(_g(v) for v in b.quadruple)
        lines.append(f"bisymmetry witness: ({quad}) deviation {_g(b.deviation)}")
    lines.extend(f"note: {n}" for n in report.notes)
    return "\n".join(lines) + "\n"


def csv_table(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(format_float(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def report_csv(report: DetectionReport, table: str = "E") -> str:
    """``table="E"`` gives the ``(x, E(x))`` profile, ``table="h"`` the nodes of
    the reconstructed representation (available on QUASIARITHMETIC reports)."""
    if table == "h":
        if report.table is None:
            raise ValueError("report has no representation table")
        return csv_table(("x", "h"), zip(report.table.xs, report.table.hs))
    if table != "E":
        raise ValueError(f"unknown table {table!r}")
    if report.profile is None:
        raise ValueError("report has no E profile")
    return csv_table(("x", "E"), report.profile.points)


def emit_report(report: DetectionReport, fmt: str = "json", table: str = "E") -> bytes:
    if fmt == "json":
        return dumps(report_dict(report)).encode()
    if fmt == "text":
        return report_text(report).encode()
    if fmt == "csv":
        return report_csv(report, table).encode()
    raise ValueError(f"unknown format {fmt!r}")
