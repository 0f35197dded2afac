"""Upper estimators for Kobayashi and Carnot-Caratheodory distances.

Poincare convention: curvature -1, d(0, r) = 2 artanh r, k(unit at 0) = 2.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import sympy as sp
from scipy.optimize import minimize

from .errors import DiscEscape, DomainError, FlowEscape, InvalidCertificate, NoConnection
from .flows import (ChartDistribution, FlowWord, StepConfig, chart_bracket_generating,
                    chow_connect, integrate_complex_flow)
from .polynomials import CompiledPoly


# ---------------------------------------------------------------------------
# Poincare disc

def poincare_distance(a: complex, b: complex) -> float:
    a, b = complex(a), complex(b)
    if abs(a) >= 1 or abs(b) >= 1:
        raise DomainError("points must lie in the open unit disc")
    r = abs(a - b) / abs(1 - a.conjugate() * b)
    return 2.0 * math.atanh(r)


@dataclass(frozen=True)
class Unreachable:
    """delta = infinity: no horizontal chain was found or can exist."""

    reason: str
    value: float = math.inf
    kind: str = "upper"

    def to_dict(self) -> dict:
        return {"value": None, "unreachable": True, "reason": self.reason, "kind": self.kind}


# ---------------------------------------------------------------------------
# horizontal discs

def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def _series_eval(cp: CompiledPoly, series: Sequence[np.ndarray]) -> np.ndarray:
    N = len(series[0])
    out = np.zeros(N, dtype=complex)
    out[0] = cp.const
    for c, pw in cp.terms:
        t = np.zeros(N, dtype=complex)
        t[0] = c
        for k, e in pw:
            for _ in range(e):
                t = _series_mul(t, series[k])
        out += t
    return out


def _horizontal_polys(cd: ChartDistribution):
    """Compiled entries of A = Pi2 Pi1^{-1} when Pi1 has constant determinant."""
    cache = getattr(cd, "_hpolys", "unset")
    if cache != "unset":
        return cache
    g = cd.frame[0].gens
    X = sp.Matrix([[cd.frame[j].comps[i].as_expr() for j in range(cd.d)] for i in range(cd.n)])
    rows = list(cd.rows)
    rest = [i for i in range(cd.n) if i not in rows]
    P1, P2 = X.extract(rows, list(range(cd.d))), X.extract(rest, list(range(cd.d)))
    det = sp.expand(P1.det())
    result = None
    if det != 0 and not sp.sympify(det).free_symbols:
        A = (P2 * P1.adjugate() / det).applyfunc(sp.expand)
        result = [[CompiledPoly(sp.Poly(A[i, j], *g, domain="QQ_I")) for j in range(cd.d)]
                  for i in range(len(rest))]
    object.__setattr__(cd, "_hpolys", result)
    return result


def _assemble(cd: ChartDistribution, free_vals, rest_vals):
    rows = list(cd.rows)
    rest = [i for i in range(cd.n) if i not in rows]
    out = [None] * cd.n
    for i, r in enumerate(rows):
        out[r] = free_vals[i]
    for i, r in enumerate(rest):
        out[r] = rest_vals[i]
    return out


@dataclass(eq=False)
class PolyDisc:
    """Disc with polynomial free part and Taylor-integrated remaining part."""

    cd: ChartDistribution
    free: np.ndarray       # (d, D+1) coefficients
    rest: np.ndarray       # (n-d, N+1) coefficients
    residual: float = 0.0
    integrator: str = "taylor"

    def __call__(self, zeta: complex) -> list:
        fv = [np.polyval(c[::-1], zeta) for c in self.free]
        rv = [np.polyval(c[::-1], zeta) for c in self.rest]
        return _assemble(self.cd, fv, rv)

    def derivative(self, zeta: complex) -> list:
        fv = [np.polyval(np.polyder(c[::-1]), zeta) if len(c) > 1 else 0j for c in self.free]
        rv = [np.polyval(np.polyder(c[::-1]), zeta) if len(c) > 1 else 0j for c in self.rest]
        return _assemble(self.cd, fv, rv)

    def sup_norm(self, m: int = 128) -> float:
        ring = np.exp(2j * np.pi * np.arange(m) / m)
        return max(max(abs(v) for v in self(z)) for z in ring)

    def to_dict(self) -> dict:
        c = lambda z: [float(z.real), float(z.imag)]
        return {"type": "polynomial", "free": [[c(v) for v in row] for row in self.free],
                "rest_degree": int(self.rest.shape[1] - 1) if self.rest.size else 0,
                "residual": self.residual, "integrator": self.integrator}


def horizontality_residual(cd: ChartDistribution, disc, m: int = 64, radius: float = 1.0) -> float:
    """sup |f_rest' - A(f) f_free'| over a ring of sample points."""
    rows = list(cd.rows)
    rest = [i for i in range(cd.n) if i not in rows]
    worst = 0.0
    for k in range(m):
        z = radius * cmath.exp(2j * math.pi * k / m)
        f, df = disc(z), disc.derivative(z)
        A = cd.horizontal_matrix(f)
        lhs = np.array([df[i] for i in rest])
        rhs = A @ np.array([df[i] for i in rows])
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) if len(rest) else 0.0)
    return worst


def _taylor_rest(cd, free: np.ndarray, z0_rest, N: int):
    A = _horizontal_polys(cd)
    if A is None:
        return None
    free_s = [np.zeros(N + 1, dtype=complex) for _ in range(cd.d)]
    for i in range(cd.d):
        m = min(len(free[i]), N + 1)
        free_s[i][:m] = free[i][:m]
    dfree = [np.append(np.arange(1, N + 1) * s[1:], 0) for s in free_s]
    rest = [np.zeros(N + 1, dtype=complex) for _ in z0_rest]
    for j, v in enumerate(z0_rest):
        rest[j][0] = v
    idx = np.arange(1, N + 1)
    for _ in range(N + 2):
        full = _assemble(cd, free_s, rest)
        new = []
        for j in range(len(rest)):
            integrand = np.zeros(N + 1, dtype=complex)
            for i in range(cd.d):
                integrand += _series_mul(_series_eval(A[j][i], full), dfree[i])
            s = np.zeros(N + 1, dtype=complex)
            s[0] = z0_rest[j]
            s[1:] = integrand[:-1] / idx
            new.append(s)
        change = max((np.max(np.abs(a - b)) for a, b in zip(new, rest)), default=0.0)
        rest = new
        if change <= 1e-16 * (1 + max((np.max(np.abs(r)) for r in rest), default=0.0)):
            break
    return rest


def radial_rest(cd: ChartDistribution, free: np.ndarray, z0_rest, zeta: complex, steps: int = 256):
    """Remaining components at zeta by RK4 along the ray [0, zeta] (oracle)."""
    y = np.array(z0_rest, dtype=complex)
    fpoly = [c[::-1] for c in free]
    dpoly = [np.polyder(c) if len(c) > 1 else np.array([0j]) for c in fpoly]

    def rhs(s, y):
        z = s * zeta
        fv = [np.polyval(c, z) for c in fpoly]
        dv = np.array([np.polyval(c, z) for c in dpoly]) * zeta
        A = cd.horizontal_matrix(_assemble(cd, fv, list(y)))
        return A @ dv

    h = 1.0 / steps
    s = 0.0
    for _ in range(steps):
        k1 = rhs(s, y)
        k2 = rhs(s + h / 2, y + h / 2 * k1)
        k3 = rhs(s + h / 2, y + h / 2 * k2)
        k4 = rhs(s + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s += h
    return y


def horizontal_disc_from_free_part(cd: ChartDistribution, free_polys, z0, cfg: dict | None = None) -> PolyDisc:
    """Complete a free part (f_1..f_d) to a horizontal disc through z0.

    free_polys[i] lists coefficients of f_i in increasing degree.
    """
    cfg = {"series_degree": 48, "residual_tol": 1e-8, **(cfg or {})}
    N = int(cfg["series_degree"])
    z0 = [complex(v) for v in z0]
    rows = list(cd.rows)
    rest_idx = [i for i in range(cd.n) if i not in rows]
    if len(free_polys) != cd.d:
        raise DomainError(f"need {cd.d} free polynomials")
    D = max(len(p) for p in free_polys)
    free = np.zeros((cd.d, D), dtype=complex)
    for i, p in enumerate(free_polys):
        free[i, :len(p)] = p
        if abs(free[i, 0] - z0[rows[i]]) > 1e-12:
            raise DomainError(f"free part {i} does not start at z0")
    z0_rest = [z0[i] for i in rest_idx]
    rest = _taylor_rest(cd, free, z0_rest, N)
    if rest is None:
        raise DiscEscape("block Pi1 is not invertible with constant determinant; "
                         "use radial_rest for pointwise values")
    rest = np.array(rest) if rest else np.zeros((0, N + 1), dtype=complex)
    if rest.size:
        tail = float(np.max(np.sum(np.abs(rest[:, -8:]), axis=1)))
        if not np.all(np.isfinite(rest)) or tail > 1e-12 * (1 + float(np.max(np.abs(rest)))):
            raise DiscEscape("Taylor series of the remaining part does not converge on the closed disc")
        # trim trailing zeros for compact output
        nz = np.nonzero(np.any(np.abs(rest) > 0, axis=0))[0]
        rest = rest[:, : (nz[-1] + 1 if len(nz) else 1)]
    disc = PolyDisc(cd, free, rest)
    if disc.sup_norm() > cd.escape_radius:
        raise DiscEscape("disc leaves the escape radius of the chart")
    disc.residual = horizontality_residual(cd, disc)
    return disc


@dataclass(eq=False)
class FlowDisc:
    """zeta -> Phi_V(R e^{i phi} zeta) base for a horizontal field V."""

    field: Callable
    base: list
    R: float
    phase: float
    label: str = ""
    cfg: StepConfig = field(default_factory=StepConfig)

    def __call__(self, zeta: complex) -> list:
        return integrate_complex_flow(self.field, self.base, self.R * cmath.exp(1j * self.phase) * zeta,
                                      self.cfg)

    def to_dict(self) -> dict:
        return {"type": "flow", "field": self.label, "R": self.R, "phase": self.phase,
                "base": [[z.real, z.imag] for z in map(complex, self.base)]}


class _FrameCombination:
    """V = sum u_i X_i with constant complex u."""

    def __init__(self, cd: ChartDistribution, u):
        self.cd, self.u = cd, np.asarray(u, dtype=complex)

    def __call__(self, z):
        X = self.cd.frame_matrix(z)
        return list(X @ self.u)


def _in_box(cd: ChartDistribution, disc, m: int = 64) -> bool:
    try:
        for k in range(m):
            p = disc(cmath.exp(2j * math.pi * k / m))
            if max(abs(v) for v in p) >= cd.box:
                return False
    except FlowEscape:
        return False
    return True


def max_flow_radius(cd: ChartDistribution, fieldfn, base, phase: float, max_radius: float = 1e3,
                    iters: int = 60, samples: int = 64) -> float:
    """Largest R <= max_radius with the flow disc inside the chart box (bisection)."""
    scfg = StepConfig(escape_radius=cd.escape_radius)
    mk = lambda R: FlowDisc(fieldfn, base, R, phase, cfg=scfg)
    if math.isinf(cd.box) or _in_box(cd, mk(max_radius), samples):
        return max_radius
    lo, hi = 0.0, max_radius
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _in_box(cd, mk(mid), samples):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# chains

@dataclass
class DiscChain:
    links: list                # [(disc, a, b)]
    start: list
    end: list
    residuals: list = field(default_factory=list)

    @property
    def value(self) -> float:
        return float(sum(poincare_distance(a, b) for _, a, b in self.links))

    def to_dict(self) -> dict:
        c = lambda z: [complex(z).real, complex(z).imag]
        return {"value": self.value, "start": [c(z) for z in self.start], "end": [c(z) for z in self.end],
                "links": [{"disc": d.to_dict(), "a": c(a), "b": c(b)} for d, a, b in self.links],
                "residuals": self.residuals}


@dataclass
class DistanceResult:
    value: float
    kind: str                  # upper | lower | heuristic
    witness: object = None
    residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        w = self.witness.to_dict() if hasattr(self.witness, "to_dict") else self.witness
        return {"value": self.value, "kind": self.kind, "witness": w, "residuals": self.residuals}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


_KOBAYASHI_DEFAULTS = {"max_radius": 1e3, "deg": 4, "max_links": 8, "refine": True,
                       "endpoint_tol": 1e-9, "samples": 64, "seed": 0}


def _flow_chain(cd: ChartDistribution, word: FlowWord, cfg: dict) -> DiscChain:
    """One flow disc per primitive stage (split when the stage time exceeds R)."""
    scfg = StepConfig(escape_radius=cd.escape_radius)
    links = []
    q = list(word.base)
    for gen, t in reversed(word.stages):
        t = complex(t)
        if t == 0:
            continue
        X = cd.frame[gen - 1]
        phase = cmath.phase(t)
        R = max_flow_radius(cd, X, q, phase, cfg["max_radius"], samples=cfg["samples"])
        if R <= 0:
            raise DiscEscape(f"no flow disc of X{gen} fits in the box at {q}")
        pieces = max(1, math.ceil(abs(t) / (0.9 * R))) if abs(t) >= R else 1
        for _ in range(pieces):
            piece = t / pieces
            Rq = max_flow_radius(cd, X, q, phase, cfg["max_radius"], samples=cfg["samples"]) if pieces > 1 else R
            disc = FlowDisc(X, list(q), Rq, phase, label=f"X{gen}", cfg=scfg)
            b = abs(piece) / Rq
            if b >= 1:
                raise DiscEscape("stage time exceeds the admissible disc radius")
            links.append((disc, 0j, complex(b)))
            q = disc(b)
    return DiscChain(links, list(word.base), q, residuals=[0.0] * len(links))


def _fit_poly_disc(cd, x, y, b: float, deg: int, iters: int = 30):
    """Gauss-Newton min-norm fit of free coefficients with f(0)=x, f(b)=y."""
    rows = list(cd.rows)
    rest_idx = [i for i in range(cd.n) if i not in rows]
    xf = np.array([x[i] for i in rows], dtype=complex)
    yf = np.array([y[i] for i in rows], dtype=complex)
    c = np.zeros((cd.d, deg), dtype=complex)
    c[:, 0] = (yf - xf) / b

    def disc_of(cvec):
        free = np.concatenate([xf[:, None], cvec.reshape(cd.d, deg)], axis=1)
        rest = _taylor_rest(cd, free, [x[i] for i in rest_idx], 48)
        rest = np.array(rest) if rest else np.zeros((0, 49), dtype=complex)
        return PolyDisc(cd, free, rest)

    def resid(cvec):
        return np.array(disc_of(cvec)(b), dtype=complex) - np.array(y, dtype=complex)

    v = c.ravel()
    r = resid(v)
    for _ in range(iters):
        if np.max(np.abs(r)) < 1e-12:
            break
        h = 1e-7
        J = np.array([(resid(v + h * e) - resid(v - h * e)) / (2 * h) for e in np.eye(len(v))]).T
        dv = np.linalg.lstsq(J, -r, rcond=None)[0]
        v = v + dv
        r = resid(v)
    return disc_of(v), float(np.max(np.abs(r)))


def _refine_single_disc(cd, x, y, upper: float, cfg: dict):
    """Bisection on b for a single polynomial disc from x to y."""
    if _horizontal_polys(cd) is None:
        return None
    b_hi = math.tanh(upper / 2) if math.isfinite(upper) else 0.999
    b_lo = 1.0 / cfg["max_radius"]
    best = None

    def feasible(b):
        for deg in range(1, cfg["deg"] + 1):
            if cd.d * deg < cd.n - cd.d + cd.d:
                continue
            try:
                disc, err = _fit_poly_disc(cd, x, y, b, deg)
            except (np.linalg.LinAlgError, ValueError, OverflowError, FloatingPointError):
                continue
            if err > cfg["endpoint_tol"] or not np.all(np.isfinite(disc.free)):
                continue
            if not math.isinf(cd.box) and disc.sup_norm() >= cd.box:
                continue
            disc.residual = horizontality_residual(cd, disc)
            if disc.residual <= 1e-8:
                return disc
        return None

    for _ in range(30):
        if b_hi - b_lo < 1e-6 * b_hi:
            break
        mid = 0.5 * (b_lo + b_hi)
        d = feasible(mid)
        if d is not None:
            best, b_hi = (d, mid), mid
        else:
            b_lo = mid
    if best is None:
        return None
    disc, b = best
    return DiscChain([(disc, 0j, complex(b))], list(x), disc(b), residuals=[disc.residual])


def kobayashi_upper(cd: ChartDistribution, x, y, cfg: dict | None = None):
    """Upper estimate of d_{M,D}(x, y) over horizontal disc chains."""
    c = {**_KOBAYASHI_DEFAULTS, **(cfg or {})}
    x = [complex(v) for v in x]
    y = [complex(v) for v in y]
    if max(abs(a - b) for a, b in zip(x, y)) <= c["endpoint_tol"]:
        return DistanceResult(0.0, "upper", DiscChain([], x, x), {"endpoint": 0.0})
    if not chart_bracket_generating(cd, x)["generating"]:
        return Unreachable("frame is not bracket generating at the start point")
    word = chow_connect(cd, x, y, {"endpoint_tol": c["endpoint_tol"]})
    chain = _flow_chain(cd, word, c)
    best = chain
    if c["refine"] and len(chain.links) <= c["max_links"]:
        alt = _refine_single_disc(cd, x, y, chain.value, c)
        if alt is not None and alt.value < best.value:
            best = alt
    err = float(max(abs(a - b) for a, b in zip(best.end, y)))
    return DistanceResult(best.value, "upper", best,
                          {"endpoint": err, "horizontality": max(best.residuals, default=0.0)})


def infinitesimal_metric_upper(cd: ChartDistribution, x, v, cfg: dict | None = None) -> DistanceResult:
    """2 * min lambda over flow discs f(0)=x, lambda f'(0) = v."""
    c = {**_KOBAYASHI_DEFAULTS, **(cfg or {})}
    x = [complex(t) for t in x]
    v = np.array(v, dtype=complex)
    if not np.any(v):
        raise DomainError("v must be nonzero")
    X = cd.frame_matrix(x)
    u, *_ = np.linalg.lstsq(X, v, rcond=None)
    if np.max(np.abs(X @ u - v)) > 1e-10 * (1 + np.max(np.abs(v))):
        raise DomainError("v is not in the distribution at x")
    V = _FrameCombination(cd, u)
    R = max_flow_radius(cd, V, x, 0.0, c["max_radius"], samples=c["samples"])
    if R <= 0:
        raise DiscEscape("no admissible disc")
    disc = FlowDisc(V, x, R, 0.0, label="sum u_i X_i")
    return DistanceResult(2.0 / R, "upper", disc, {"R": R})


# ---------------------------------------------------------------------------
# Carnot-Caratheodory distance

def euclidean_metric(d: int) -> Callable:
    def G(z):
        B = z.shape[1]
        return np.broadcast_to(np.eye(d), (B, d, d))
    return G


def poincare_metric(scale: float = 1.0) -> Callable:
    """scale * 4 |dz|^2 / (1 - |z|^2)^2 on the disc (rank-one frame d/dz)."""
    def G(z):
        w = scale * 4.0 / (1.0 - np.abs(z[0]) ** 2) ** 2
        return w[:, None, None]
    return G


@dataclass
class HorizontalPath:
    controls: np.ndarray         # (K, d) complex
    start: list
    end: list
    length: float
    endpoint_error: float
    substeps: int = 1

    def to_dict(self) -> dict:
        c = lambda z: [float(complex(z).real), float(complex(z).imag)]
        return {"controls": [[c(u) for u in row] for row in self.controls],
                "start": [c(z) for z in self.start], "end": [c(z) for z in self.end],
                "length": self.length, "endpoint_error": self.endpoint_error,
                "segments": int(len(self.controls)), "substeps": self.substeps}


def _rollout(cd: ChartDistribution, U: np.ndarray, x, substeps: int, metric=None):
    """Batched rollout: U has shape (B, K, d); returns endpoints (B, n) and lengths (B,)."""
    B, K, d = U.shape
    comps = [f.compiled() for f in cd.frame]
    z = np.tile(np.asarray(x, dtype=complex)[:, None], (1, B))
    h = 1.0 / (K * substeps)
    length = np.zeros(B)
    energy = np.zeros(B)

    def rhs(z, u):
        out = np.zeros_like(z)
        for i in range(d):
            ui = u[:, i]
            for k, p in enumerate(comps[i]):
                if p.terms or p.const:
                    out[k] += ui * p(z)
        return out

    def speed(z, u):
        if metric is None:
            return np.zeros(B)
        G = metric(z)
        q = np.einsum("bi,bij,bj->b", u.conj(), G, u).real
        return np.sqrt(np.maximum(q, 0.0))

    for k in range(K):
        u = U[:, k, :]
        for _ in range(substeps):
            s0 = speed(z, u)
            k1 = rhs(z, u)
            k2 = rhs(z + 0.5 * h * k1, u)
            k3 = rhs(z + 0.5 * h * k2, u)
            k4 = rhs(z + h * k3, u)
            z = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            s1 = speed(z, u)
            length += 0.5 * h * (s0 + s1)
            energy += 0.5 * h * (s0 ** 2 + s1 ** 2)
    return z.T, length, energy


_CC_DEFAULTS = {"segments": 64, "substeps": 1, "real_slice": False, "endpoint_tol": 1e-8,
                "seed": 0, "restarts": 2, "maxiter": 300, "fd_step": 1e-7}


def cc_distance_upper(cd: ChartDistribution, metric_on_D: Callable | None, x, y, cfg: dict | None = None):
    """Length of a near-minimal piecewise-constant horizontal path from x to y."""
    c = {**_CC_DEFAULTS, **(cfg or {})}
    metric = metric_on_D or euclidean_metric(cd.d)
    x = np.array(x, dtype=complex)
    y = np.array(y, dtype=complex)
    K, d, m = int(c["segments"]), cd.d, int(c["substeps"])
    if np.max(np.abs(x - y)) <= c["endpoint_tol"]:
        path = HorizontalPath(np.zeros((K, d), dtype=complex), list(x), list(x), 0.0, 0.0, m)
        return DistanceResult(0.0, "upper", path, {"endpoint": 0.0})
    if not chart_bracket_generating(cd, list(x))["generating"]:
        raise NoConnection("frame is not bracket generating at the start point")
    real = bool(c["real_slice"])
    nv = K * d * (1 if real else 2)

    def unpack(P):
        P = np.atleast_2d(P)
        if real:
            return P.reshape(-1, K, d).astype(complex)
        return (P[:, : K * d] + 1j * P[:, K * d:]).reshape(-1, K, d)

    def residual_vec(Z):
        diff = Z - y[None, :]
        return diff.real if real else np.concatenate([diff.real, diff.imag], axis=1)

    h = float(c["fd_step"])
    cache = {}

    def batch(P):
        key = P.tobytes()
        if key not in cache:
            Ps = np.vstack([P[None, :], P[None, :] + h * np.eye(nv)])
            Z, L, E = _rollout(cd, unpack(Ps), x, m, metric)
            cache.clear()
            cache[key] = (Z, L, E)
        return cache[key]

    def energy(P):
        return float(batch(P)[2][0])

    def energy_grad(P):
        E = batch(P)[2]
        return (E[1:] - E[0]) / h

    def cons(P):
        return residual_vec(batch(P)[0][:1])[0]

    def cons_jac(P):
        R = residual_vec(batch(P)[0])
        return ((R[1:] - R[0]) / h).T

    rng = np.random.default_rng(c["seed"])
    best = None
    for _ in range(int(c["restarts"])):
        P0 = rng.standard_normal(nv) * max(1.0, float(np.max(np.abs(y - x))))
        res = minimize(energy, P0, jac=energy_grad, method="SLSQP",
                       constraints=[{"type": "eq", "fun": cons, "jac": cons_jac}],
                       options={"maxiter": int(c["maxiter"]), "ftol": 1e-12})
        P = res.x
        # Gauss-Newton polish of the endpoint (min-norm steps)
        for _ in range(20):
            r = cons(P)
            if np.max(np.abs(r)) <= 0.1 * c["endpoint_tol"]:
                break
            P = P + np.linalg.lstsq(cons_jac(P), -r, rcond=None)[0]
        Z, L, E = _rollout(cd, unpack(P[None, :]), x, m, metric)
        err = float(np.max(np.abs(Z[0] - y)))
        cand = (float(L[0]), err, P)
        if err <= c["endpoint_tol"] and (best is None or cand[0] < best[0]):
            best = cand
    if best is None:
        raise NoConnection("no restart met the endpoint tolerance")
    L, err, P = best
    U = unpack(P[None, :])[0]
    Z, _, _ = _rollout(cd, U[None], x, m, metric)
    path = HorizontalPath(U, list(x), list(Z[0]), L, err, m)
    return DistanceResult(L, "upper", path, {"endpoint": err, "error_bar": err})


def replay_path(cd: ChartDistribution, path: HorizontalPath, metric=None):
    metric = metric or euclidean_metric(cd.d)
    Z, L, _ = _rollout(cd, path.controls[None], path.start, path.substeps, metric)
    return list(Z[0]), float(L[0])


# ---------------------------------------------------------------------------
# Schwarz lower bound

def schwarz_lower_bound(cert, rho: float, rho_kind: str = "exact") -> DistanceResult:
    """sqrt(c) * rho; labeled heuristic unless rho is exact or derived."""
    c = cert.c if hasattr(cert, "c") else float(cert)
    if not c > 0:
        raise InvalidCertificate(f"certificate constant must be positive, got {c}")
    if rho < 0:
        raise DomainError("rho must be nonnegative")
    kind = "lower" if rho_kind in ("exact", "derived", "lower") else "heuristic"
    return DistanceResult(math.sqrt(c) * rho, kind, None, {"rho": rho, "rho_kind": rho_kind, "c": c})
