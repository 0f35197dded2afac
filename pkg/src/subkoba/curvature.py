"""Invariant metric on the superhorizontal distribution and its curvature.

On a canonical flag domain the metric is g(z, x) = B(z, sigma x) on g_-1 and
the holomorphic bisectional curvature is

    Bisec(z, x) = -B([z, sigma z], [x, sigma x]) / (g(z, z) g(x, x)).

Exact values use Gaussian rationals; the bound certificate maximizes the
sectional curvature numerically over the metric unit sphere.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import exact as ex
from .errors import DomainError, NotNegative
from .exact import QQ_I, ZERO
from .grading import GradedDecomposition
from .lie_core import RealFormData
from .optim import sphere_maximize


def _vec(v, n):
    v = [ex.gauss(c) for c in v]
    if len(v) != n:
        raise DomainError(f"expected a vector of length {n}, got {len(v)}")
    return v


def _check_level(gd: GradedDecomposition, v, name="vector"):
    if not gd.in_level(v, -1):
        raise DomainError(f"{name} is not in g_-1")


def frame_roots(gd: GradedDecomposition, full: bool = False) -> list:
    """Positive roots a whose e_-a span g_-1 (or all of g^- when ``full``)."""
    if full:
        return [a for a in gd.bd.rd.positive_roots if gd.levels[a] > 0]
    return [a for a in gd.bd.rd.positive_roots if gd.levels[a] == 1]


def frame_vector(gd: GradedDecomposition, coords, full: bool = False) -> list:
    """sum coords_a e_-a over the frame roots."""
    roots = frame_roots(gd, full)
    if len(coords) != len(roots):
        raise DomainError(f"expected {len(roots)} coordinates")
    v = [ZERO] * gd.dim
    for a, c in zip(roots, coords):
        v[gd.bd.root_index[tuple(-x for x in a)]] = ex.gauss(c)
    return v


def invariant_metric(rf: RealFormData, zeta, xi, gd: GradedDecomposition | None = None):
    """g(zeta, xi) = B(zeta, sigma xi), exact; vectors must lie in g_-1 when gd is given."""
    n = rf.bd.dim
    zeta, xi = _vec(zeta, n), _vec(xi, n)
    if gd is not None:
        _check_level(gd, zeta, "zeta")
        _check_level(gd, xi, "xi")
    return rf.bd.killing(zeta, rf.sigma(xi))


def _real(z):
    if z.y:
        raise ArithmeticError(f"expected a real value, got {z}")
    return z.x


def bracket_with_conjugate(rf: RealFormData, zeta):
    return rf.bd.bracket(zeta, rf.sigma(zeta))


def in_i_v(rf: RealFormData, gd: GradedDecomposition, x) -> bool:
    """Exact test of x in sqrt(-1) v, i.e. x in g_0 and sigma x = -x."""
    return gd.in_level(x, 0) and rf.sigma(x) == ex.vscale(QQ_I(-1, 0), x)


def bisectional_curvature(rf: RealFormData, gd: GradedDecomposition, zeta, xi):
    n = rf.bd.dim
    zeta, xi = _vec(zeta, n), _vec(xi, n)
    _check_level(gd, zeta, "zeta")
    _check_level(gd, xi, "xi")
    if not any(zeta) or not any(xi):
        raise DomainError("curvature is undefined at the zero vector")
    bd = rf.bd
    num = -bd.killing(bracket_with_conjugate(rf, zeta), bracket_with_conjugate(rf, xi))
    den = invariant_metric(rf, zeta, zeta) * invariant_metric(rf, xi, xi)
    return _real(num / den)


def sectional_curvature(rf: RealFormData, gd: GradedDecomposition, zeta):
    return bisectional_curvature(rf, gd, zeta, zeta)


# ---------------------------------------------------------------------------
# curvature tensor from the root-sum expression

@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """Components R[a, b, c, d] on the frame f_a = e_-a (a in ``roots``)."""

    roots: tuple
    components: dict        # (a, b, c, d) index tuple -> exact value
    signs: dict             # (a, b) -> -1 (noncompact pair), +1 (compact pair), 0
    full: bool

    def contract(self, z, w) -> "QQ_I.dtype":
        z = [ex.gauss(c) for c in z]
        w = [ex.gauss(c) for c in w]
        s = ZERO
        for (a, b, c, d), R in self.components.items():
            s += R * z[a] * ex.conj(z[b]) * w[c] * ex.conj(w[d])
        return s


def _project_v(gd: GradedDecomposition, x):
    return [c if gd.level_of_index(i) == 0 else ZERO for i, c in enumerate(x)]


def curvature_tensor(rf: RealFormData, gd: GradedDecomposition, full: bool = False) -> CurvatureTensor:
    """R_{a b c d} = s_ab * eps_d * B([[e_-a, e_b]_v, f_c], e_d).

    s_ab is -1 when a, b are both noncompact (first root sum), +1 when both
    are compact and outside v (second sum) and 0 for mixed pairs.
    """
    bd = rf.bd
    roots = tuple(frame_roots(gd, full))
    neg = {a: bd.e(tuple(-x for x in a)) for a in roots}
    pos = {a: bd.e(a) for a in roots}
    comps, signs = {}, {}
    for ia, a in enumerate(roots):
        for ib, b in enumerate(roots):
            nc_a, nc_b = not rf.is_compact(a), not rf.is_compact(b)
            s = -1 if (nc_a and nc_b) else (1 if (not nc_a and not nc_b) else 0)
            signs[(ia, ib)] = s
            if not s:
                continue
            Hv = _project_v(gd, bd.bracket(neg[a], pos[b]))
            if not any(Hv):
                continue
            for ic, c in enumerate(roots):
                u = bd.bracket(Hv, neg[c])
                if not any(u):
                    continue
                for id_, d in enumerate(roots):
                    val = bd.killing(u, pos[d])
                    if val:
                        comps[(ia, ib, ic, id_)] = QQ_I(s * rf.eps[d], 0) * val
    return CurvatureTensor(roots=roots, components=comps, signs=signs, full=full)


def tensor_bisectional(rf, gd, T: CurvatureTensor, z, w):
    """Bisec from tensor contraction with frame coordinates z, w."""
    zeta = frame_vector(gd, z, T.full)
    xi = frame_vector(gd, w, T.full)
    den = invariant_metric(rf, zeta, zeta) * invariant_metric(rf, xi, xi)
    return _real(T.contract(z, w) / den)


def compact_term_check(rf: RealFormData, gd: GradedDecomposition) -> list:
    """For each frame root a: (a, sign, Q_a) with Q_a = B([[e_-a, e_a]_v, e_-a], e_a).

    Q_a > 0 always; the root sums weight it by -1 (noncompact) or +1 (compact).
    """
    bd = rf.bd
    out = []
    for a in frame_roots(gd, full=True):
        na = bd.e(tuple(-x for x in a))
        Hv = _project_v(gd, bd.bracket(na, bd.e(a)))
        Q = _real(bd.killing(bd.bracket(Hv, na), bd.e(a)))
        out.append((a, 1 if rf.is_compact(a) else -1, Q))
    return out


# ---------------------------------------------------------------------------
# numeric certification

@dataclass
class CurvatureCertificate:
    c: float
    argmax: list                 # complex frame coordinates of the maximizer
    restarts: int
    tol: float
    best_value: float
    spread: float
    iterations: list
    exact_sample: dict
    frame: list
    seed: int = 0
    full_frame: bool = False
    values: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "argmax": [[z.real, z.imag] for z in self.argmax],
            "restarts": self.restarts,
            "tol": self.tol,
            "seed": self.seed,
            "best_value": self.best_value,
            "spread": self.spread,
            "iterations": self.iterations,
            "frame": self.frame,
            "full_frame": self.full_frame,
            "exact_sample": self.exact_sample,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _SectionalModel:
    """H on the metric unit sphere, in real coordinates u with z = w / sqrt(b)."""

    def __init__(self, rf: RealFormData, gd: GradedDecomposition, full: bool = False):
        bd = rf.bd
        roots = frame_roots(gd, full)
        self.roots = roots
        m = len(roots)
        self.m = m
        self.g_diag = np.array([float(rf.eps[a] * bd.b[a]) for a in roots])
        n = bd.dim
        W = np.zeros((m, m, n), dtype=complex)
        for ia, a in enumerate(roots):
            na = bd.e(tuple(-x for x in a))
            for ib, b in enumerate(roots):
                sb = ex.vscale(QQ_I(rf.eps[b], 0), bd.e(b))
                W[ia, ib] = [ex.to_complex(c) for c in bd.bracket(na, sb)]
        self.W = W
        self.K = bd.algebra.killing_dense()

    def scale(self) -> np.ndarray:
        return 1.0 / np.sqrt(np.abs(self.g_diag))

    def z_of(self, u) -> np.ndarray:
        m = self.m
        return (u[:m] + 1j * u[m:]) * self.scale()

    def Z(self, z):
        return np.einsum("a,b,abk->k", z, z.conj(), self.W)

    def value(self, u) -> float:
        z = self.z_of(u)
        Z = self.Z(z)
        return float(-(Z @ self.K @ Z).real)

    def grad(self, u) -> np.ndarray:
        z = self.z_of(u)
        Z = self.Z(z)
        KZ = self.K @ Z
        A = np.einsum("b,cbk->ck", z.conj(), self.W)   # dZ/dz_c
        Bm = np.einsum("a,ack->ck", z, self.W)          # dZ/dzbar_c
        s = self.scale()
        dx = (A + Bm) @ KZ
        dy = (1j * A - 1j * Bm) @ KZ
        return np.concatenate([-2 * (dx.real) * s, -2 * (dy.real) * s])


def certify_negative_bound(rf: RealFormData, gd: GradedDecomposition, opt_config: dict | None = None,
                           full_frame: bool = False) -> CurvatureCertificate:
    cfg = {"restarts": 32, "max_iter": 5000, "tol": 1e-10, "seed": 0}
    cfg.update(opt_config or {})
    model = _SectionalModel(rf, gd, full_frame)
    if model.m == 0:
        raise DomainError("g_-1 is zero")
    bad = np.where(model.g_diag <= 0)[0]
    if len(bad):
        w = [0j] * model.m
        w[int(bad[0])] = 1 + 0j
        raise NotNegative("invariant form is not positive on the distribution "
                          f"(g = {model.g_diag[bad[0]]:g} on e_-{model.roots[bad[0]]})",
                          witness=w, value=float(model.g_diag[bad[0]]))
    res = sphere_maximize(model.value, model.grad, 2 * model.m, restarts=int(cfg["restarts"]),
                          max_iter=int(cfg["max_iter"]), tol=float(cfg["tol"]), seed=int(cfg["seed"]))
    best = res.best
    z = model.z_of(best.x)
    if best.value >= -float(cfg["tol"]):
        raise NotNegative(f"sectional curvature reaches {best.value:g} >= 0",
                          witness=list(z), value=best.value)
    # exact anchor: rationalize the maximizer and evaluate H exactly
    zq = [ex.rationalize(c) for c in z]
    val = sectional_curvature(rf, gd, frame_vector(gd, zq, full_frame)) if not full_frame else None
    if full_frame:
        zeta = frame_vector(gd, zq, True)
        num = -rf.bd.killing(bracket_with_conjugate(rf, zeta), bracket_with_conjugate(rf, zeta))
        g = rf.bd.killing(zeta, rf.sigma(zeta))
        val = _real(num / (g * g))
    frac = ex.to_fraction(val)
    return CurvatureCertificate(
        c=-best.value, argmax=[complex(c) for c in z], restarts=int(cfg["restarts"]),
        tol=float(cfg["tol"]), best_value=best.value, spread=res.spread,
        iterations=[r.iterations for r in res.runs],
        exact_sample={"point": [ex.fmt_gauss(c) for c in zq],
                      "value_as_rational": f"{frac.numerator}/{frac.denominator}",
                      "value": float(frac)},
        frame=["e(" + ",".join(str(-x) for x in a) + ")" for a in model.roots],
        seed=int(cfg["seed"]), full_frame=full_frame, values=list(res.values))
