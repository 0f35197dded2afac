"""Command-line entry point: ``subkoba <command> [options]``.

Exit status: 0 on success, 1 on input errors, 2 when a check fails
(negativity not certified, classification rejected, no connection, ...).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (DegenerateFrame, DiscEscape, DomainError, FixtureError, FlowEscape, InvalidGradingElement,
                     InvalidRealForm, NoConnection, NotNegative, SubkobaError, UnboundedEntry, UnsupportedType)
from .exact import fmt_gauss, fmt_rational
from .fixtures import dumps, load_alg, load_chart

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2

# every key a config file may set, with its default
DEFAULTS = {
    "seed": 0,
    "restarts": 32,
    "max_iter": 5000,
    "tol": 1e-10,
    "endpoint_tol": 1e-9,
    "max_waypoints": 1024,
    "segments": 64,
    "cc_restarts": 2,
    "max_radius": 1e3,
    "max_links": 8,
    "pass_tol": 1e-8,
    "grid": 9,
    "N": 1,
    "safety": 1.01,
}
POSITIVE = {"tol", "endpoint_tol", "pass_tol", "max_radius", "safety"}


class InputError(Exception):
    pass


def resolve_config(path: str | None, overrides: dict) -> dict:
    cfg = dict(DEFAULTS)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as e:
            raise InputError(f"cannot read config {path}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise InputError(f"config {path}: {e.msg} at line {e.lineno}") from None
        if not isinstance(data, dict):
            raise InputError("config must be a JSON object")
        unknown = sorted(set(data) - set(DEFAULTS))
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(data)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    for k, v in cfg.items():
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise InputError(f"config key {k} must be numeric")
        if k in POSITIVE and not v > 0:
            raise InputError(f"config key {k} must be > 0")
        if k not in POSITIVE and k != "seed" and v < (0 if k == "N" else 1):
            raise InputError(f"config key {k} out of range")
    return cfg


def parse_point(text: str, n: int | None = None) -> list:
    """Comma-separated complex numbers, e.g. '0,0,1' or '0.5+0.1j,0'."""
    try:
        pts = [complex(s.strip().replace(" ", "")) for s in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse point {text!r}") from None
    if n is not None and len(pts) != n:
        raise InputError(f"point {text!r} must have {n} coordinates")
    return pts


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# commands

def cmd_root_system(a, cfg):
    from .lie_core import build_normalized_basis, build_root_system, normalization_report
    rd = build_root_system(a.type)
    bd = build_normalized_basis(rd)
    rep = normalization_report(bd)
    failures = {k: v for k, v in rep.items() if isinstance(v, list) and v}
    cyc = rep.get("cyclic", {})
    result = {"cartan_type": rd.cartan_type, "rank": rd.rank, "cartan_matrix": rd.cartan_matrix,
              "positive_roots": [list(r) for r in rd.positive_roots], "dim": bd.algebra.dim,
              "normalization_failures": {k: len(v) for k, v in failures.items()},
              "cyclic": {"checked": cyc.get("checked"), "failed": len(cyc.get("failed", []))},
              "ok": not failures}
    table = [{"root": ",".join(map(str, r)), "b": fmt_rational(bd.b[r])} for r in rd.positive_roots]
    return result, EXIT_OK if not failures else EXIT_CHECK, table


def _v_arg(v):
    if v in (None, "torus"):
        return None
    try:
        return [int(s) for s in v.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"--v must be 'torus' or simple-root indices, got {v!r}") from None


def _graded(a):
    from .grading import flag_domain
    if a.fixture:
        fx = load_alg(a.fixture)
        if fx.gd is None:
            raise InputError("fixture carries no root-system grading")
        return fx.gd
    if not a.type:
        raise InputError("give --type or --fixture")
    return flag_domain(a.type, _v_arg(a.v))


def cmd_grade(a, cfg):
    from .grading import check_bracket_generating, superhorizontal, validate_graded_brackets
    gd = _graded(a)
    gen = check_bracket_generating(gd.spaces.get(-1, []), gd)
    vb = validate_graded_brackets(gd)
    result = {"cartan_type": gd.bd.rd.cartan_type, "T": [fmt_rational(t) for t in gd.T], "depth": gd.depth,
              "dims": list(gd.dims_tuple()), "levels": list(range(-gd.depth, gd.depth + 1)),
              "bracket_generating": gen.generating,
              "generating_depth": getattr(gen, "depth", None),
              "superhorizontal_roots": [list(r) for r in superhorizontal(gd)],
              "graded_brackets_ok": vb["ok"]}
    table = [{"level": l, "dim": d} for l, d in zip(result["levels"], result["dims"])]
    return result, EXIT_OK, table


def cmd_curvature_bound(a, cfg):
    from .curvature import certify_negative_bound
    gd = _graded(a)
    if gd.rf is None:
        raise InputError("grading has no real form")
    opt = {"restarts": int(cfg["restarts"]), "max_iter": int(cfg["max_iter"]), "tol": cfg["tol"],
           "seed": int(cfg["seed"])}
    try:
        cert = certify_negative_bound(gd.rf, gd, opt)
    except NotNegative as e:
        return {"verdict": "NotNegative", "message": str(e),
                "witness": [_c(z) for z in e.witness] if e.witness is not None else None,
                "value": e.value}, EXIT_CHECK, None
    d = cert.to_dict()
    d["verdict"] = "certified"
    return d, EXIT_OK, [{"restart": i, "value": v} for i, v in enumerate(cert.values)]


def _chart(a):
    if not a.fixture:
        raise InputError("--fixture is required")
    return load_chart(a.fixture)


def cmd_chow_connect(a, cfg):
    from .flows import chow_connect
    cd = _chart(a)
    x, y = parse_point(a.source, cd.n), parse_point(a.target, cd.n)
    try:
        word = chow_connect(cd, x, y, {"endpoint_tol": cfg["endpoint_tol"],
                                       "max_waypoints": int(cfg["max_waypoints"])})
    except NoConnection as e:
        return {"verdict": "NoConnection", "message": str(e)}, EXIT_CHECK, None
    d = word.to_dict()
    d["verdict"] = "connected" if word.error <= cfg["endpoint_tol"] else "inaccurate"
    table = [{"stage": i, "generator": json.dumps(s["generator"]), "re_t": s["time"][0], "im_t": s["time"][1]}
             for i, s in enumerate(d["stages"])]
    return d, EXIT_OK if d["verdict"] == "connected" else EXIT_CHECK, table


def cmd_cc_distance(a, cfg):
    from .distances import cc_distance_upper, euclidean_metric, poincare_metric
    cd = _chart(a)
    x, y = parse_point(a.source, cd.n), parse_point(a.target, cd.n)
    metric = poincare_metric() if a.metric == "poincare" else euclidean_metric(cd.d)
    try:
        res = cc_distance_upper(cd, metric, x, y, {"segments": int(cfg["segments"]), "seed": int(cfg["seed"]),
                                                   "restarts": int(cfg["cc_restarts"])})
    except NoConnection as e:
        return {"verdict": "NoConnection", "message": str(e)}, EXIT_CHECK, None
    d = res.to_dict()
    d["metric"] = a.metric
    return d, EXIT_OK, None


def cmd_kobayashi(a, cfg):
    from .distances import Unreachable, infinitesimal_metric_upper, kobayashi_upper
    cd = _chart(a)
    x = parse_point(a.source, cd.n)
    kcfg = {"max_radius": cfg["max_radius"], "max_links": int(cfg["max_links"]),
            "endpoint_tol": cfg["endpoint_tol"], "seed": int(cfg["seed"])}
    if a.vector:
        res = infinitesimal_metric_upper(cd, x, parse_point(a.vector, cd.n), kcfg)
        d = res.to_dict()
        d["quantity"] = "infinitesimal"
        return d, EXIT_OK, None
    if not a.target:
        raise InputError("give --to or --vector")
    res = kobayashi_upper(cd, x, parse_point(a.target, cd.n), kcfg)
    d = res.to_dict()
    d["quantity"] = "distance"
    if isinstance(res, Unreachable):
        return d, EXIT_CHECK, None
    return d, EXIT_OK, None


def cmd_classify(a, cfg):
    from .hyperbolicity import check_no_complex_line, classify_homogeneous
    if not a.fixture:
        raise InputError("--fixture is required")
    fx = load_alg(a.fixture)
    v = classify_homogeneous(fx.hd)
    d = v.to_dict()
    d["datum"] = fx.name
    if a.complex_line:
        ncl = check_no_complex_line(fx.hd, {"seed": int(cfg["seed"]), "pass_tol": cfg["pass_tol"]})
        d["no_complex_line"] = {k: ncl[k] for k in ("pass", "min", "degenerate", "witness")}
    ok = v.accepted and (not a.complex_line or d["no_complex_line"]["pass"])
    return d, EXIT_OK if ok else EXIT_CHECK, None


def cmd_forstneric(a, cfg):
    from .hyperbolicity import check_forstneric_assumption, compute_CN
    cd = _chart(a)
    rep = check_forstneric_assumption(cd, grid=int(cfg["grid"]), seed=int(cfg["seed"]))
    if rep["verdict"] in ("proven", "sampled"):
        try:
            rep["C_N"] = compute_CN(cd, int(cfg["N"]), safety=cfg["safety"])
        except UnboundedEntry as e:
            rep["C_N"] = {"error": str(e)}
    return rep, EXIT_OK if rep["verdict"] == "proven" else EXIT_CHECK, None


COMMANDS = {
    "root-system": cmd_root_system,
    "grade": cmd_grade,
    "curvature-bound": cmd_curvature_bound,
    "chow-connect": cmd_chow_connect,
    "cc-distance": cmd_cc_distance,
    "kobayashi-estimate": cmd_kobayashi,
    "classify": cmd_classify,
    "forstneric-check": cmd_forstneric,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of numeric settings")
    common.add_argument("--seed", type=int)
    common.add_argument("--restarts", type=int)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit timestamp and timing")

    p = argparse.ArgumentParser(prog="subkoba", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("root-system", parents=[common], help="root system and normalized basis checks")
    s.add_argument("--type", required=True)

    for name, hlp in (("grade", "graded decomposition"), ("curvature-bound", "negative curvature certificate")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--type")
        s.add_argument("--v", default="torus", help="'torus' or comma-separated simple roots spanning v")
        s.add_argument("--fixture")

    for name, hlp in (("chow-connect", "flow word joining two points"),
                      ("cc-distance", "Carnot-Caratheodory upper estimate"),
                      ("kobayashi-estimate", "Kobayashi distance / metric upper estimate")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--fixture", required=True)
        s.add_argument("--from", dest="source", required=True)
        s.add_argument("--to", dest="target", required=(name != "kobayashi-estimate"))
        if name == "cc-distance":
            s.add_argument("--metric", choices=("euclidean", "poincare"), default="euclidean")
            s.add_argument("--segments", type=int)
        if name == "kobayashi-estimate":
            s.add_argument("--vector", help="tangent vector for the infinitesimal metric")

    s = sub.add_parser("classify", parents=[common], help="classification of a homogeneous datum")
    s.add_argument("--fixture", required=True)
    s.add_argument("--complex-line", action="store_true", help="also run the no-complex-line minimization")

    s = sub.add_parser("forstneric-check", parents=[common], help="invertible minor and C_N on a chart")
    s.add_argument("--fixture", required=True)
    s.add_argument("--N", type=int)
    return p


def _flatten(obj, prefix="") -> list:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    return [(prefix, json.dumps(obj) if isinstance(obj, list) else obj)]


def render(report: dict, fmt: str, table) -> str:
    if fmt == "json":
        return dumps(report) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if table:
        cols = list(table[0])
        w.writerow(cols)
        for row in table:
            w.writerow([row[c] for c in cols])
    else:
        w.writerow(["key", "value"])
        for k, v in _flatten(report):
            w.writerow([k, v])
    return buf.getvalue()


def _clean(obj):
    """Replace non-finite floats and numpy scalars so the report is strict JSON."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, complex):
        return _c(obj)
    if hasattr(obj, "x") and hasattr(obj, "y"):
        return fmt_gauss(obj)
    return obj


def run(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    t0 = time.perf_counter()
    overrides = {"seed": a.seed, "restarts": a.restarts, "N": getattr(a, "N", None),
                 "segments": getattr(a, "segments", None)}
    report = {"command": a.command, "version": __version__}
    table = None
    try:
        cfg = resolve_config(a.config, overrides)
        report["config"] = {"args": {k: v for k, v in sorted(vars(a).items())
                                     if k not in ("command", "output", "format", "no_timestamp")},
                            "settings": cfg}
        result, code, table = COMMANDS[a.command](a, cfg)
        report["status"] = "ok" if code == EXIT_OK else "check-failed"
        report["result"] = result
    except (InputError, FixtureError, UnsupportedType, InvalidRealForm, InvalidGradingElement, DomainError) as e:
        code = EXIT_INPUT
        report["status"] = "input-error"
        report["error"] = {"type": type(e).__name__, "message": str(e),
                           "location": getattr(e, "location", None)}
    except (DegenerateFrame, FlowEscape, DiscEscape, SubkobaError) as e:
        code = EXIT_CHECK
        report["status"] = "check-failed"
        report["error"] = {"type": type(e).__name__, "message": str(e)}
    report["exit_code"] = code
    if not a.no_timestamp:
        report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        report["elapsed_s"] = round(time.perf_counter() - t0, 3)
    text = render(_clean(report), a.format, table if code == EXIT_OK else None)
    if a.output:
        Path(a.output).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_INPUT:
        print(f"subkoba: {report['error']['message']}", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
