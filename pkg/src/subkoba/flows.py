"""Complex flows of polynomial fields, flow words and Chow connectivity."""
from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DegenerateFrame, FlowEscape, NoConnection
from .polynomials import (PolyField, gens, numeric_matrix, parse_word, word_field,
                          word_json, word_str)


@dataclass(frozen=True)
class StepConfig:
    tol: float = 1e-10           # absolute local error per step
    h0: float = 0.25             # first step, as a fraction of the unit interval
    h_min: float = 1e-12
    max_steps: int = 200_000
    escape_radius: float = float("inf")


# ---------------------------------------------------------------------------
# chart distributions

@dataclass(frozen=True, eq=False)
class ChartDistribution:
    """Frame X_1..X_d of polynomial fields on a polydisc chart of C^n.

    ``completion`` lists bracket words completing the frame to n fields;
    ``free_rows`` picks the coordinates whose d x d block of the frame
    matrix is inverted for horizontal discs (first d by default).
    """

    n: int
    frame: tuple
    box: float = 1.0
    completion: tuple = ()
    name: str = "chart"
    free_rows: tuple | None = None

    @property
    def d(self) -> int:
        return len(self.frame)

    @property
    def rows(self) -> tuple:
        return self.free_rows if self.free_rows is not None else tuple(range(self.d))

    @property
    def escape_radius(self) -> float:
        return 10.0 * self.box

    def completion_fields(self) -> tuple:
        c = getattr(self, "_cfields", None)
        if c is None:
            c = tuple(word_field(self.frame, w) for w in self.completion)
            object.__setattr__(self, "_cfields", c)
        return c

    def full_fields(self) -> tuple:
        return tuple(self.frame) + self.completion_fields()

    def full_words(self) -> tuple:
        return tuple(range(1, self.d + 1)) + tuple(self.completion)

    def frame_matrix(self, z, full: bool = False) -> np.ndarray:
        return numeric_matrix(self.full_fields() if full else self.frame, z)

    def horizontal_matrix(self, z) -> np.ndarray:
        """A(z) with f_rest' = A(f) f_free' for horizontal maps f."""
        X = self.frame_matrix(z)
        rows = list(self.rows)
        rest = [i for i in range(self.n) if i not in rows]
        P1, P2 = X[rows, :], X[rest, :]
        return P2 @ np.linalg.inv(P1)

    def coframe_block(self, z) -> np.ndarray:
        """((pi_4)^{-1} pi_3)(z) = -A(z), the block entering the disc ODE."""
        return -self.horizontal_matrix(z)

    def sample_grid(self, k: int = 3, radius: float | None = None) -> list:
        r = self.box if radius is None else radius
        ring = [r * s * cmath.exp(2j * np.pi * m / k) for s in (0.0, 0.5, 1.0) for m in range(k)]
        ring = list(dict.fromkeys(ring))
        pts = []
        for idx in np.ndindex(*([len(ring)] * self.n)):
            pts.append([ring[i] for i in idx])
        return pts

    def validate(self, k: int = 3, tol: float = 1e-9) -> dict:
        """Sampled pointwise independence of the frame (and completion)."""
        pts = self.sample_grid(k)
        worst_frame = worst_full = np.inf
        for z in pts:
            s = np.linalg.svd(self.frame_matrix(z), compute_uv=False)
            worst_frame = min(worst_frame, s[-1])
            if self.completion:
                s = np.linalg.svd(self.frame_matrix(z, True), compute_uv=False)
                worst_full = min(worst_full, s[-1])
        return {"frame_independent": bool(worst_frame > tol), "min_sv_frame": float(worst_frame),
                "full_basis": bool(worst_full > tol) if self.completion else None,
                "min_sv_full": float(worst_full) if self.completion else None,
                "samples": len(pts), "kind": "sampled"}

    def to_dict(self) -> dict:
        return {"format": "subkoba.chart/1", "name": self.name, "n": self.n, "box": self.box,
                "frame": [f.to_dict() for f in self.frame],
                "completion": [word_json(w) for w in self.completion],
                "free_rows": list(self.free_rows) if self.free_rows is not None else None}

    @classmethod
    def from_dict(cls, data: dict) -> "ChartDistribution":
        n = int(data["n"])
        frame = tuple(PolyField.from_dict(f, n) for f in data["frame"])
        comp = tuple(parse_word(w) for w in data.get("completion", []))
        fr = data.get("free_rows")
        return cls(n=n, frame=frame, box=float(data.get("box", 1.0)), completion=comp,
                   name=data.get("name", "chart"), free_rows=tuple(fr) if fr is not None else None)


def chart_bracket_generating(cd: ChartDistribution, x, max_depth: int | None = None,
                             tol: float = 1e-9) -> dict:
    """Numeric rank of iterated brackets of the frame evaluated at x.

    Returns the depth at which the evaluations span C^n and the bracket words
    used, or ``generating: False`` with the stabilized rank.
    """
    n = cd.n
    max_depth = max_depth or n
    words = list(range(1, cd.d + 1))
    fields = {w: cd.frame[w - 1] for w in words}
    chosen = []
    vecs = []

    def try_add(w):
        v = np.array(fields[w](x), dtype=complex)
        M = np.array(vecs + [v])
        if np.linalg.matrix_rank(M, tol=tol) > len(vecs):
            vecs.append(v)
            chosen.append(w)
            return True
        return False

    for w in words:
        try_add(w)
    layer = list(words)
    depth = 1
    while len(vecs) < n and depth < max_depth:
        depth += 1
        nxt = []
        for a in range(1, cd.d + 1):
            for w in layer:
                if w == a:
                    continue
                nw = (a, w)
                f = fields[a].bracket(fields[w])
                if f.is_zero():
                    continue
                fields[nw] = f
                nxt.append(nw)
                try_add(nw)
        if not nxt:
            break
        layer = nxt
    return {"generating": len(vecs) == n, "depth": depth, "rank": len(vecs),
            "words": chosen, "words_str": [word_str(w) for w in chosen]}


def complete_chart(cd: ChartDistribution, x=None) -> ChartDistribution:
    """Attach bracket words spanning the tangent space at x (default origin)."""
    x = [0j] * cd.n if x is None else x
    rep = chart_bracket_generating(cd, x)
    if not rep["generating"]:
        raise DegenerateFrame(f"frame is not bracket generating at {x}")
    extra = tuple(w for w in rep["words"] if not isinstance(w, int))
    return replace(cd, completion=extra)


# ---------------------------------------------------------------------------
# integration

def _rk4_flow(F, z, w: complex, cfg: StepConfig, stage=None) -> list:
    """Integrate dz/dl = w F(z) for l in [0, 1] with step doubling."""
    z = list(z)
    n = len(z)
    if w == 0:
        return z

    def rhs(p):
        return [w * c for c in F(p)]

    def step(p, h):
        k1 = rhs(p)
        k2 = rhs([p[i] + 0.5 * h * k1[i] for i in range(n)])
        k3 = rhs([p[i] + 0.5 * h * k2[i] for i in range(n)])
        k4 = rhs([p[i] + h * k3[i] for i in range(n)])
        return [p[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(n)]

    lam, h = 0.0, cfg.h0
    steps = 0
    while lam < 1.0:
        h = min(h, 1.0 - lam)
        full = step(z, h)
        half = step(step(z, 0.5 * h), 0.5 * h)
        err = max(abs(half[i] - full[i]) for i in range(n)) / 15.0
        if err <= cfg.tol or h <= cfg.h_min:
            z = [half[i] + (half[i] - full[i]) / 15.0 for i in range(n)]
            lam += h
            if max(abs(c) for c in z) > cfg.escape_radius or any(c != c for c in z):
                raise FlowEscape(f"flow left the escape radius {cfg.escape_radius:g}", stage=stage)
            fac = 4.0 if err == 0 else min(4.0, max(0.1, 0.9 * (cfg.tol / err) ** 0.2))
            h *= fac
        else:
            h *= max(0.1, 0.9 * (cfg.tol / err) ** 0.2)
        steps += 1
        if steps > cfg.max_steps:
            raise FlowEscape("step budget exhausted", stage=stage)
    return z


def integrate_complex_flow(X: PolyField, z0, t: complex, step_cfg: StepConfig | None = None,
                           stage=None) -> list:
    """Phi_X(t) z0 = phi_X(Re t) o phi_{iX}(Im t) z0."""
    cfg = step_cfg or StepConfig()
    t = complex(t)
    z = [complex(c) for c in z0]
    if t.imag:
        z = _rk4_flow(X, z, 1j * t.imag, cfg, stage)
    if t.real:
        z = _rk4_flow(X, z, complex(t.real), cfg, stage)
    return z


def _is_real_positive(t: complex) -> bool:
    return t.real > 0 and abs(t.imag) <= 1e-15 * abs(t)


def expand_stage(word, t: complex) -> list:
    """Primitive stages realizing flow of a bracket word for time t.

    [A:s][B:s][A:-s][B:-s] moves by -s^2 [A, B] to leading order, so
    s = sqrt(-t); for real positive t the pair is swapped to keep s real.
    """
    t = complex(t)
    if isinstance(word, int):
        return [(word, t)]
    a, b = word
    if _is_real_positive(t):
        a, b, t = b, a, -t
    s = cmath.sqrt(-t)
    return _commutator(a, b, s)


def _commutator(a, b, s: complex) -> list:
    return expand_stage(a, s) + expand_stage(b, s) + expand_stage(a, -s) + expand_stage(b, -s)


def _stage_field(cd: ChartDistribution, gen) -> PolyField:
    return word_field(cd.frame, gen)


def compose_flows(cd: ChartDistribution, word: Sequence, base, step_cfg: StepConfig | None = None,
                  expand: bool = True) -> list:
    """Apply a word of (generator, time) stages, rightmost stage first.

    Bracket generators are expanded into commutators of frame flows unless
    ``expand`` is False, in which case the true flow of the bracket field is used.
    """
    cfg = step_cfg or StepConfig(escape_radius=cd.escape_radius)
    z = [complex(c) for c in base]
    for idx in range(len(word) - 1, -1, -1):
        gen, t = word[idx]
        gen = parse_word(gen) if not isinstance(gen, (int, tuple)) else gen
        stages = expand_stage(gen, t) if expand else [(gen, complex(t))]
        for g, tt in reversed(stages):
            try:
                z = integrate_complex_flow(_stage_field(cd, g), z, tt, cfg, stage=idx)
            except FlowEscape as e:
                raise FlowEscape(str(e), stage=idx) from None
    return z


def flow_map(cd: ChartDistribution, times, base, step_cfg: StepConfig | None = None) -> list:
    """F(t_1..t_n) = phi_1(t_1) o ... o phi_n(t_n) base with true bracket flows."""
    word = list(zip(cd.full_words(), times))
    return compose_flows(cd, word, base, step_cfg, expand=False)


def _fd_jacobian(fun, t, h: float) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    cols = []
    for j in range(len(t)):
        e = np.zeros(len(t), dtype=complex)
        e[j] = h
        cols.append((np.array(fun(t + e)) - np.array(fun(t - e))) / (2 * h))
    return np.array(cols).T


def jacobian_at_zero(cd: ChartDistribution, base=None, h: float = 1e-5,
                     step_cfg: StepConfig | None = None, sv_tol: float = 1e-8) -> np.ndarray:
    """Central-difference Jacobian of F at t = 0 (equals the full frame at base)."""
    if len(cd.full_fields()) != cd.n:
        raise DegenerateFrame(f"completed frame has {len(cd.full_fields())} fields, need {cd.n}")
    base = [0j] * cd.n if base is None else [complex(c) for c in base]
    J = _fd_jacobian(lambda t: flow_map(cd, t, base, step_cfg), np.zeros(cd.n), h)
    s = np.linalg.svd(J, compute_uv=False)
    if s[-1] < sv_tol:
        raise DegenerateFrame(f"Jacobian of F is singular (smallest singular value {s[-1]:.3g})")
    return J


# ---------------------------------------------------------------------------
# flow words and connection

@dataclass
class FlowWord:
    stages: list                 # [(generator, complex time)], rightmost applied first
    base: list
    target: list
    endpoint: list
    error: float
    meta: dict = field(default_factory=dict)

    def replay(self, cd: ChartDistribution, step_cfg: StepConfig | None = None) -> list:
        return compose_flows(cd, self.stages, self.base, step_cfg)

    def to_dict(self) -> dict:
        c = lambda z: [z.real, z.imag]
        return {"stages": [{"generator": word_json(g), "time": c(complex(t))} for g, t in self.stages],
                "base": [c(complex(z)) for z in self.base],
                "target": [c(complex(z)) for z in self.target],
                "endpoint": [c(complex(z)) for z in self.endpoint],
                "error": self.error, "meta": self.meta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "FlowWord":
        z = lambda p: complex(p[0], p[1])
        return cls(stages=[(parse_word(s["generator"]), z(s["time"])) for s in d["stages"]],
                   base=[z(p) for p in d["base"]], target=[z(p) for p in d["target"]],
                   endpoint=[z(p) for p in d["endpoint"]], error=float(d["error"]),
                   meta=d.get("meta", {}))


_CONNECT_DEFAULTS = {"endpoint_tol": 1e-9, "max_waypoints": 1024, "newton_iter": 30,
                     "polish_iter": 40, "fd_step": 1e-6, "drop_tol": 1e-14}


def _newton(fun, t0, target, tol, iters, h) -> tuple:
    t = np.array(t0, dtype=complex)
    target = np.asarray(target, dtype=complex)
    r = np.array(fun(t)) - target
    for _ in range(iters):
        if np.max(np.abs(r)) <= tol:
            return t, r, True
        J = _fd_jacobian(fun, t, h)
        dt = np.linalg.lstsq(J, -r, rcond=None)[0]
        lam = 1.0
        while True:
            tn = t + lam * dt
            try:
                rn = np.array(fun(tn)) - target
            except FlowEscape:
                rn = None
            if rn is not None and np.max(np.abs(rn)) < np.max(np.abs(r)):
                break
            lam *= 0.5
            if lam < 1e-6:
                return t, r, False
        t, r = tn, rn
    return t, r, bool(np.max(np.abs(r)) <= tol)


def _segment_words(cd: ChartDistribution, times, drop_tol: float) -> list:
    """Horizontal parametrization of one F-segment: [(word, swapped, param)]."""
    out = []
    for w, t in zip(cd.full_words(), times):
        t = complex(t)
        if isinstance(w, int):
            if t != 0:
                out.append((w, False, t))
            continue
        if abs(t) <= drop_tol:
            continue
        swapped = _is_real_positive(t)
        tt = -t if swapped else t
        out.append((w, swapped, cmath.sqrt(-tt)))
    return out


def _segment_stages(seg, params) -> list:
    stages = []
    for (w, swapped, _), p in zip(seg, params):
        if isinstance(w, int):
            stages.append((w, complex(p)))
        else:
            a, b = (w[1], w[0]) if swapped else w
            stages.extend(_commutator(a, b, complex(p)))
    return stages


def chow_connect(cd: ChartDistribution, x, y, cfg: dict | None = None) -> FlowWord:
    """Horizontal flow word from x to y built by local inversion of F."""
    c = dict(_CONNECT_DEFAULTS)
    c.update(cfg or {})
    x = [complex(v) for v in x]
    y = [complex(v) for v in y]
    gen = chart_bracket_generating(cd, x)
    if not gen["generating"]:
        raise NoConnection(f"frame is not bracket generating at {x} (rank {gen['rank']})")
    if len(cd.full_fields()) != cd.n:
        cd = complete_chart(cd, x)
    tol = c["endpoint_tol"]
    if max(abs(a - b) for a, b in zip(x, y)) <= tol:
        return FlowWord([], x, y, list(x), max(abs(a - b) for a, b in zip(x, y)),
                        meta={"waypoints": 0})
    scfg = StepConfig(escape_radius=cd.escape_radius)
    k = 1
    while k <= c["max_waypoints"]:
        segs, q, ok = [], x, True
        for i in range(1, k + 1):
            wp = [a + (b - a) * i / k for a, b in zip(x, y)]
            fun = lambda t, q=q: flow_map(cd, t, q, scfg)
            t, r, conv = _newton(fun, np.zeros(cd.n), wp, 1e-13 * max(1.0, np.max(np.abs(wp))),
                                 c["newton_iter"], c["fd_step"])
            if not conv and np.max(np.abs(r)) > tol:
                ok = False
                break
            segs.append(t)
            q = list(np.array(wp) + r)
        if ok:
            break
        k *= 2
    else:
        raise NoConnection(f"Newton failed with {c['max_waypoints']} waypoints")

    # horizontal word; later segments sit to the left
    parts = [_segment_words(cd, t, c["drop_tol"]) for t in segs]
    fixed = []
    for seg in parts[:-1]:
        fixed = _segment_stages(seg, [p for *_, p in seg]) + fixed
    last = parts[-1]
    start = compose_flows(cd, fixed, x, scfg) if fixed else x

    def endpoint(params):
        return compose_flows(cd, _segment_stages(last, params), start, scfg)

    p0 = np.array([p for *_, p in last], dtype=complex)
    if len(p0):
        p, r, _ = _newton(endpoint, p0, y, 0.1 * tol, c["polish_iter"], c["fd_step"])
    else:
        p = p0
    stages = _segment_stages(last, p) + fixed
    end = compose_flows(cd, stages, x, scfg)
    err = float(max(abs(a - b) for a, b in zip(end, y)))
    if err > tol:
        raise NoConnection(f"endpoint error {err:.3g} above tolerance {tol:g}")
    return FlowWord(stages, x, y, end, err,
                    meta={"waypoints": k, "bracket_words": [word_str(w) for w in cd.completion]})


# ---------------------------------------------------------------------------
# fixtures

def heisenberg_chart(box: float = 1.0) -> ChartDistribution:
    """X1 = d1, X2 = d2 + z1 d3 on C^3; [X1, X2] = d3."""
    z = gens(3)
    X1 = PolyField.from_exprs([1, 0, 0], 3)
    X2 = PolyField.from_exprs([0, 1, z[0]], 3)
    return ChartDistribution(n=3, frame=(X1, X2), box=box, completion=((1, 2),), name="heisenberg")


def engel_chart(box: float = 1.0) -> ChartDistribution:
    """X1 = d1, X2 = d2 + z1 d3 + z3 d4 on C^4 (depth 3)."""
    z = gens(4)
    X1 = PolyField.from_exprs([1, 0, 0, 0], 4)
    X2 = PolyField.from_exprs([0, 1, z[0], z[2]], 4)
    return ChartDistribution(n=4, frame=(X1, X2), box=box, completion=((1, 2), (2, (1, 2))),
                             name="engel")


def disc_chart() -> ChartDistribution:
    """Unit disc with its full tangent frame d/dz."""
    return ChartDistribution(n=1, frame=(PolyField.from_exprs([1], 1),), box=1.0, name="disc")


def degenerate_chart() -> ChartDistribution:
    """X2 = 2 X1: rank-deficient on purpose."""
    X1 = PolyField.from_exprs([1, 0, 0], 3)
    X2 = PolyField.from_exprs([2, 0, 0], 3)
    return ChartDistribution(n=3, frame=(X1, X2), box=1.0, completion=((1, 2),), name="degenerate")


def vanishing_minor_chart() -> ChartDistribution:
    """X = z1 d1 on C: the only minor z1 vanishes at the origin."""
    z = gens(1)
    return ChartDistribution(n=1, frame=(PolyField.from_exprs([z[0]], 1),), box=1.0, name="vanishing-minor")


def shifted_minor_chart() -> ChartDistribution:
    """X = (2 + z1) d1 on the unit disc: the minor vanishes only outside the chart."""
    z = gens(1)
    return ChartDistribution(n=1, frame=(PolyField.from_exprs([2 + z[0]], 1),), box=1.0, name="shifted-minor")


def heisenberg_subframe(box: float = 1.0) -> ChartDistribution:
    """Only X1 of the Heisenberg frame (not bracket generating)."""
    h = heisenberg_chart(box)
    return ChartDistribution(n=3, frame=h.frame[:1], box=box, name="heisenberg-x1")
