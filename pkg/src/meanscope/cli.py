"""``meanscope`` command line.

Exit codes: 0 for QUASIARITHMETIC or a successful evaluation, 1 for
NOT_QUASIARITHMETIC, 2 for INCONCLUSIVE and for any input error.

A ``--config`` file holds ``key = value`` lines named after the long flags
(``interval = 1 2``, ``builtin = quad_over_id``, ``fit-tol = 1e-7``); blank
lines and ``#`` comments are ignored. Command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from dataclasses import dataclass, replace
from typing import Any, Callable, Optional, Sequence

from .detector import DetectorConfig, Verdict, detect
from .errors import MeanscopeError
from .expr import CATALOG, GeneratorPair, builtin_pair, eval_value
from .means import bajraktarevic_mean, cauchy_mean, check_regularity, quasiarithmetic_mean
from .report import SCHEMA, csv_table, dumps, emit_report, pair_dict
from .sampling import default_seed, make_rng, random_points
from .wronskian import (
    ConicCoefficients,
    check_ode_lemma,
    expression_profile,
    fit_conic,
    fit_quadratic_form,
)

EXIT_OK, EXIT_NOT, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


# Options that may also come from the config file: dest -> (parser of the
# config-file text, detector config field or None).
CONFIGURABLE: dict[str, tuple[Callable[[str], Any], Optional[str]]] = {
    "f": (str, None),
    "g": (str, None),
    "builtin": (str, None),
    "param": (_floats, None),
    "interval": (_floats, None),
    "format": (str, None),
    "output": (str, None),
    "table": (str, None),
    "seed": (int, "seed"),
    "kind": (str, None),
    "at": (_floats, None),
    "points": (int, None),
    "probes": (int, "probes"),
    "profile_points": (int, "profile_points"),
    "fit_samples": (int, "fit_samples"),
    "constancy_tol_abs": (float, "constancy_tol_abs"),
    "constancy_tol_rel": (float, "constancy_tol_rel"),
    "fit_tol": (float, "fit_tol"),
    "h_nodes": (int, "h_nodes"),
    "equality_grid": (int, "equality_grid"),
    "equality_tol": (float, "equality_tol"),
    "quadruples": (int, "bisymmetry_quadruples"),
    "bisymmetry_tol": (float, "bisymmetry_tol"),
}

DEFAULTS = {"format": "json", "table": "E", "kind": "cauchy", "points": 20}


def read_config(path: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            dest = key.replace("-", "_")
            if dest not in CONFIGURABLE:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[dest] = CONFIGURABLE[dest][0](value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key!r}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("generator pair")
    src.add_argument("-f", help="expression for f in the variable x")
    src.add_argument("-g", help="expression for g in the variable x")
    src.add_argument("--builtin", help="catalog pair: " + ", ".join(sorted(CATALOG)))
    src.add_argument("--param", type=float, action="append", help="catalog parameter (repeatable)")
    src.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"))
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=("json", "text", "csv"))
    out.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")
    out.add_argument("--table", choices=("E", "h"), help="csv table for detect")
    run = common.add_argument_group("run")
    run.add_argument("--config", metavar="FILE", help="key = value file mirroring the flags")
    run.add_argument("--seed", type=int)
    for dest, (kind, _) in CONFIGURABLE.items():
        if dest in ("f", "g", "builtin", "param", "interval", "format", "output", "table",
                    "seed", "kind", "at", "points"):
            continue
        run.add_argument("--" + dest.replace("_", "-"), type=kind)

    parser = argparse.ArgumentParser(
        prog="meanscope",
        description="Decide whether a Cauchy mean is quasiarithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("detect", parents=[common], help="run the full detector")
    em = sub.add_parser("eval-mean", parents=[common], help="evaluate a mean at a point")
    em.add_argument("--kind", choices=("cauchy", "bajraktarevic", "quasiarithmetic"))
    em.add_argument("--at", type=float, nargs=2, metavar=("X", "Y"))
    sub.add_parser("profile-E", parents=[common], help="tabulate the invariant E")
    sub.add_parser("fit-conic", parents=[common], help="fit a conic through (f, g)")
    sub.add_parser("fit-qform", parents=[common], help="fit the quadratic form in (f', g')")
    cl = sub.add_parser("check-lemmas", parents=[common], help="ODE identity residuals")
    cl.add_argument("--points", type=int)
    return parser


def _enclosing(points: Sequence[float]) -> list[float]:
    # Smallest sensible open interval around the evaluation points.
    lo, hi = min(points), max(points)
    return [lo - 1e-9 * (1 + abs(lo)), hi + 1e-9 * (1 + abs(hi))]


@dataclass
class RunConfig:
    command: str
    pair: GeneratorPair
    fmt: str
    output: Optional[str]
    table: str
    detector: DetectorConfig
    options: dict


def resolve(args: argparse.Namespace) -> RunConfig:
    """Merge flags over the config file over the defaults and validate."""
    merged: dict[str, Any] = dict(DEFAULTS)
    if args.config:
        merged.update(read_config(args.config))
    for dest in CONFIGURABLE:
        value = getattr(args, dest, None)
        if value is not None:
            merged[dest] = value

    has_expr = merged.get("f") is not None or merged.get("g") is not None
    if has_expr == (merged.get("builtin") is not None):
        raise UsageError("give either -f and -g or --builtin")
    interval = merged.get("interval")
    if interval is not None and len(interval) != 2:
        raise UsageError("interval needs two numbers")
    if has_expr:
        quasi = args.command == "eval-mean" and merged.get("kind") == "quasiarithmetic"
        if merged.get("f") is None or (merged.get("g") is None and not quasi):
            raise UsageError("both -f and -g are required")
        if interval is None and args.command == "eval-mean" and merged.get("at"):
            interval = _enclosing(merged["at"])
        if interval is None:
            raise UsageError("--interval is required with -f/-g")
        pair = GeneratorPair.from_text(merged["f"], merged.get("g") or "1", *interval,
                                       name="custom")
    else:
        pair = builtin_pair(merged["builtin"], merged.get("param") or (),
                            tuple(interval) if interval else None)

    overrides = {field: merged[dest] for dest, (_, field) in CONFIGURABLE.items()
                 if field is not None and dest in merged}
    detector = replace(DetectorConfig(), **overrides)
    return RunConfig(args.command, pair, merged["format"], merged.get("output"),
                     merged["table"], detector, merged)


# Commands -----------------------------------------------------------------

def _doc(kind: str, pair: GeneratorPair, **fields) -> dict:
    return {"schema": SCHEMA, "kind": kind, "pair": pair_dict(pair), **fields}


def _plain(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if key in ("schema", "points"):
            continue
        if isinstance(value, dict):
            value = ", ".join(f"{k}={v}" for k, v in value.items())
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _conic_doc(c: ConicCoefficients) -> dict:
    return {"coefficients": {"alpha": c.alpha, "beta": c.beta, "gamma": c.gamma,
                             "delta": c.delta, "epsilon": c.epsilon, "eta": c.eta},
            "residual": c.residual, "nondegenerate": c.nondegenerate,
            "quadratic_part_nonzero": c.quadratic_part_nonzero,
            "det_q": c.det_q, "det_quadratic_part": c.det_quadratic_part}


def run(cfg: RunConfig) -> tuple[int, bytes]:
    pair, fmt = cfg.pair, cfg.fmt
    if cfg.command == "detect":
        report = detect(pair, cfg.detector)
        code = {Verdict.QUASIARITHMETIC: EXIT_OK,
                Verdict.NOT_QUASIARITHMETIC: EXIT_NOT}.get(report.verdict, EXIT_INCONCLUSIVE)
        return code, emit_report(report, fmt, cfg.table)

    if cfg.command == "eval-mean":
        at = cfg.options.get("at")
        if not at or len(at) != 2:
            raise UsageError("--at X Y is required")
        x, y = at
        kind = cfg.options["kind"]
        if kind == "cauchy":
            if x not in pair.interval or y not in pair.interval:
                raise UsageError("points must lie inside the interval")
            mean = cauchy_mean(pair, x, y)
        elif kind == "bajraktarevic":
            mean = bajraktarevic_mean(pair.f, pair.g, x, y, pair.interval)
        else:
            mean = quasiarithmetic_mean(lambda t: eval_value(pair.f, t), x, y, pair.interval)
        if fmt == "csv":
            return EXIT_OK, csv_table(("x", "y", "mean"), [(x, y, mean.value)]).encode()
        if fmt == "text":
            return EXIT_OK, (format(mean.value, ".17g") + "\n").encode()
        return EXIT_OK, dumps(_doc("eval-mean", pair, mean_kind=kind, x=x, y=y,
                                   value=mean.value, iterations=mean.iterations)).encode()

    if cfg.command == "profile-E":
        d = cfg.detector
        pr = expression_profile(pair, d.profile_points, d.constancy_tol_abs, d.constancy_tol_rel)
        if fmt == "csv":
            return EXIT_OK, csv_table(("x", "E"), pr.points).encode()
        doc = _doc("profile-E", pair, min=pr.min, max=pr.max, median=pr.median,
                   spread=pr.spread, argmin=pr.argmin, argmax=pr.argmax,
                   constancy=pr.constancy, points=[list(p) for p in pr.points])
        return EXIT_OK, (_plain(doc) if fmt == "text" else dumps(doc)).encode()

    if cfg.command == "fit-conic":
        doc = _doc("fit-conic", pair, **_conic_doc(fit_conic(pair, cfg.detector.fit_samples)))
    elif cfg.command == "fit-qform":
        q = fit_quadratic_form(pair, cfg.detector.fit_samples)
        doc = _doc("fit-qform", pair, coefficients={"a": q.a, "b": q.b, "c": q.c},
                   residual=q.residual, rank=q.rank)
    else:
        reg = check_regularity(pair, cfg.detector.probes)
        if reg.class_level < 3:
            raise MeanscopeError(f"pair is only in sampled class C_{reg.class_level}")
        seed = cfg.detector.seed if cfg.detector.seed is not None else default_seed()
        pts = random_points(pair.interval, cfg.options["points"], make_rng(seed))
        residuals = [check_ode_lemma(pair, x) for x in pts]
        worst = [max(r[0] for r in residuals), max(r[1] for r in residuals)]
        doc = _doc("check-lemmas", pair, seed=seed, n_points=len(pts),
                   max_residual_f=worst[0], max_residual_g=worst[1],
                   median_residual=statistics.median(max(r) for r in residuals))
    if fmt == "csv":
        raise UsageError(f"{cfg.command} has no csv output")
    return EXIT_OK, (_plain(doc) if fmt == "text" else dumps(doc)).encode()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        code, payload = run(cfg)
    except (MeanscopeError, ValueError, OSError) as exc:
        print(f"meanscope: error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if cfg.output:
        with open(cfg.output, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
