"""Fixture files: ``.alg`` (Lie algebra data) and ``.chart`` (polynomial frames).

Both are JSON.  Exact rationals are "p/q" strings and complex numbers are
[re, im] pairs of such strings.  Parse failures raise ``FixtureError`` with
the JSON line/column or the offending field path.
"""
from __future__ import annotations

import json
import math
from dataclasses import replace
from pathlib import Path

from . import exact as ex
from .errors import FixtureError, InvalidRealForm, SubkobaError
from .flows import ChartDistribution
from .grading import GradedDecomposition, flag_domain, grade, grading_element
from .hyperbolicity import HomogeneousDatum, flag_datum, flip_j_on_plane, with_g1R_roots
from .lie_core import LieAlgebra, apply_real_form, build_normalized_basis, build_root_system

ALG_FORMAT = "subkoba.alg/1"
CHART_FORMAT = "subkoba.chart/1"


def _load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FixtureError(f"cannot read {path}: {e.strerror}", str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FixtureError(f"{path}: {e.msg}", f"line {e.lineno}, column {e.colno}") from None
    if not isinstance(data, dict):
        raise FixtureError(f"{path}: top level must be an object", "line 1")
    return data


def _field(data: dict, key: str, where: str):
    if key not in data:
        raise FixtureError(f"missing field {key!r}", f"{where}.{key}")
    return data[key]


def _scalar(x, where: str):
    """'p/q' string, number, or [re, im] pair to an element of Q(i)."""
    try:
        if isinstance(x, list):
            return ex.parse_gauss(x)
        if isinstance(x, str):
            return ex.gauss(ex.parse_rational(x))
        if isinstance(x, int):
            return ex.gauss(x)
    except (ValueError, TypeError, ZeroDivisionError):
        pass
    raise FixtureError(f"expected 'p/q' or [re, im], got {x!r}", where)


def _vectors(rows, dim: int, where: str) -> tuple:
    out = []
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != dim:
            raise FixtureError(f"vector must have {dim} entries", f"{where}[{i}]")
        out.append(tuple(_scalar(c, f"{where}[{i}][{k}]") for k, c in enumerate(r)))
    return tuple(out)


def _root(x, where: str) -> tuple:
    if isinstance(x, str):
        x = x.split(",")
    try:
        return tuple(int(c) for c in x)
    except (TypeError, ValueError):
        raise FixtureError(f"bad root {x!r}", where) from None


# ---------------------------------------------------------------------------
# .alg

class AlgFixture:
    """Loaded ``.alg`` data: a grading with real form, and/or a homogeneous datum."""

    def __init__(self, name: str, gd: GradedDecomposition | None, hd: HomogeneousDatum, source: dict):
        self.name = name
        self.gd = gd
        self.hd = hd
        self.source = source


def _flag_fixture(data: dict) -> AlgFixture:
    ct = _field(data, "cartan_type", "$")
    v = data.get("v", "torus")
    try:
        rd = build_root_system(ct)
    except (ValueError, SubkobaError) as e:
        raise FixtureError(str(e), "$.cartan_type") from None
    bd = build_normalized_basis(rd)
    try:
        T = grading_element(rd, None if v == "torus" else v)
    except (ValueError, SubkobaError) as e:
        raise FixtureError(str(e), "$.v") from None
    if "eps" in data:
        raw = data["eps"]
        if not isinstance(raw, dict):
            raise FixtureError("eps must map 'a,b,...' root keys to +1/-1", "$.eps")
        eps = {_root(k, f"$.eps.{k}"): val for k, val in raw.items()}
        try:
            rf = apply_real_form(bd, eps)
        except InvalidRealForm as e:
            raise FixtureError(str(e), "$.eps") from None
        # parity against the labels is not enforced here: compact labelings
        # are legitimate inputs whose rejection is the point of the fixture
        gd = replace(grade(bd, T), rf=rf)
    else:
        gd = flag_domain(ct, None if v == "torus" else v)
    name = data.get("name", f"{ct}/{v}")
    hd = flag_datum(gd, name=name)
    try:
        for i, r in enumerate(data.get("flip_j", [])):
            hd = flip_j_on_plane(hd, _root(r, f"$.flip_j[{i}]"), name=name)
        if "g1R_roots" in data:
            hd = with_g1R_roots(hd, [_root(x, f"$.g1R_roots[{i}]") for i, x in enumerate(data["g1R_roots"])])
    except ValueError as e:
        raise FixtureError(f"not a positive root: {e}", "$.flip_j / $.g1R_roots") from None
    return AlgFixture(name, gd, hd, data)


def _datum_fixture(data: dict) -> AlgFixture:
    alg = _field(data, "algebra", "$")
    try:
        dim = int(_field(alg, "dim", "$.algebra"))
        rows = _field(alg, "structure", "$.algebra")
        table: dict = {}
        for i, r in enumerate(rows):
            if not isinstance(r, list) or len(r) != 4:
                raise FixtureError("structure rows are [i, j, k, coeff]", f"$.algebra.structure[{i}]")
            a, b, k, c = r
            table.setdefault((int(a), int(b)), []).append((int(k), _scalar(c, f"$.algebra.structure[{i}][3]")))
        la = LieAlgebra(dim, table, alg.get("tags"))
    except (TypeError, ValueError) as e:
        raise FixtureError(str(e), "$.algebra") from None
    vec = lambda key, default=None: _vectors(data.get(key, default) if default is not None else _field(data, key, "$"),
                                           dim, f"$.{key}")
    j = _vectors(_field(data, "j", "$"), dim, "$.j")
    if len(j) != dim:
        raise FixtureError(f"j must be {dim} x {dim}", "$.j")
    theta = _vectors(data["theta"], dim, "$.theta") if data.get("theta") is not None else None
    hd = HomogeneousDatum(la=la, v=vec("v", []), m=vec("m"), j=j, g1R=vec("g1R"), theta=theta,
                          name=data.get("name", "datum"))
    return AlgFixture(hd.name, None, hd, data)


def load_alg(path) -> AlgFixture:
    data = _load_json(path)
    fmt = data.get("format")
    if fmt != ALG_FORMAT:
        raise FixtureError(f"format must be {ALG_FORMAT!r}, got {fmt!r}", "$.format")
    kind = data.get("kind")
    if kind == "flag":
        return _flag_fixture(data)
    if kind == "datum":
        return _datum_fixture(data)
    raise FixtureError(f"kind must be 'flag' or 'datum', got {kind!r}", "$.kind")


def _real_rows(M) -> list:
    out = []
    for r in M:
        out.append([ex.fmt_rational(c.x) if not c.y else ex.fmt_gauss(c) for c in r])
    return out


def datum_to_dict(hd: HomogeneousDatum) -> dict:
    return {"format": ALG_FORMAT, "kind": "datum", "name": hd.name, "algebra": hd.la.to_dict(),
            "v": _real_rows(hd.v), "m": _real_rows(hd.m), "j": _real_rows(hd.j), "g1R": _real_rows(hd.g1R),
            "theta": _real_rows(hd.theta) if hd.theta is not None else None}


# ---------------------------------------------------------------------------
# .chart

def chart_to_dict(cd: ChartDistribution) -> dict:
    d = cd.to_dict()
    if math.isinf(cd.box):
        d["box"] = "inf"
    return d


def load_chart(path) -> ChartDistribution:
    data = _load_json(path)
    if data.get("format") != CHART_FORMAT:
        raise FixtureError(f"format must be {CHART_FORMAT!r}", "$.format")
    n = _field(data, "n", "$")
    frame = _field(data, "frame", "$")
    if not isinstance(n, int) or n < 1:
        raise FixtureError("n must be a positive integer", "$.n")
    if not isinstance(frame, list) or not frame:
        raise FixtureError("frame must be a nonempty list of fields", "$.frame")
    for i, f in enumerate(frame):
        if not isinstance(f, list) or len(f) != n:
            raise FixtureError(f"field must have {n} components", f"$.frame[{i}]")
        for k, comp in enumerate(f):
            for t, term in enumerate(comp):
                where = f"$.frame[{i}][{k}][{t}]"
                if not (isinstance(term, list) and len(term) == 2 and isinstance(term[0], list)
                        and len(term[0]) == n):
                    raise FixtureError(f"term must be [[{n} exponents], [re, im]]", where)
                _scalar(term[1], where + "[1]")
    try:
        cd = ChartDistribution.from_dict(data)
    except (TypeError, ValueError, KeyError) as e:
        raise FixtureError(str(e), "$") from None
    if not cd.box > 0:
        raise FixtureError("box must be positive", "$.box")
    return cd


def _has_dict(x) -> bool:
    return isinstance(x, dict) or (isinstance(x, list) and any(_has_dict(y) for y in x))


def dumps(obj, indent: int = 0) -> str:
    """JSON with objects indented and dict-free lists kept on one line."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and _has_dict(obj):
        items = [pad + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj)


def save_json(obj: dict, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")
