"""Checkable conditions for homogeneous pairs (M, D) = (G/V, G x_V g1R).

A ``HomogeneousDatum`` lives on a real Lie algebra given by rational
structure constants in a real basis.  All verdict steps are exact except the
no-complex-line test, which is a multi-start minimization.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np
import sympy as sp
from sympy.polys.matrices import DomainMatrix

from . import exact as ex
from .errors import DomainError, InvalidIdeal, UnboundedEntry
from .exact import ONE, QQ_I, ZERO
from .flows import ChartDistribution
from .grading import GradedDecomposition, GradedSpaces, validate_graded_brackets
from .lie_core import LieAlgebra, RealFormData
from .optim import sphere_maximize

ALMOST_EFFECTIVE_NOTE = ("almost effective read as: v contains no nonzero ideal of g "
                         "and B is negative definite on v")


def _neg(v):
    return [-c for c in v]


def _mat_apply(M, v):
    return ex.matvec(M, v)


@dataclass(frozen=True, eq=False)
class HomogeneousDatum:
    """Real Lie algebra g = v + m with j on m (j v = 0) and g1R inside m.

    Vectors are coordinate lists over the real basis of ``la``; ``j`` and
    ``theta`` are matrices acting on such coordinates.
    """

    la: LieAlgebra
    v: tuple
    m: tuple
    j: tuple
    g1R: tuple
    theta: tuple | None = None
    name: str = "datum"
    labels: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.la.dim

    def J(self, x):
        return _mat_apply(self.j, x)

    def Theta(self, x):
        return _mat_apply(self.theta, x)

    def bracket(self, x, y):
        return self.la.bracket(x, y)

    def k_basis(self) -> list:
        if self.theta is None:
            return []
        n = self.dim
        return ex.span([ex.vadd(ex.unit(n, i), self.Theta(ex.unit(n, i))) for i in range(n)], n)

    def q_basis(self) -> list:
        if self.theta is None:
            return []
        n = self.dim
        return ex.span([ex.vsub(ex.unit(n, i), self.Theta(ex.unit(n, i))) for i in range(n)], n)

    def describe(self, x) -> str:
        """Readable form of a coordinate vector in the tag basis."""
        parts = []
        for c, t in zip(x, self.la.tags):
            if c:
                parts.append(f"({ex.fmt_rational(c.x) if not c.y else c})*{t}")
        return " + ".join(parts) or "0"


# ---------------------------------------------------------------------------
# builders

def _real_basis(rf: RealFormData):
    """Real basis of g (complex coordinate vectors) with tags and root labels."""
    bd = rf.bd
    vecs, tags, owner = [], [], []
    for k, t in enumerate(rf.t_basis):
        vecs.append(list(t))
        tags.append(f"ih{k + 1}")
        owner.append(None)
    for a in bd.rd.positive_roots:
        ea, fa = bd.e(a), bd.e(tuple(-x for x in a))
        eps = QQ_I(rf.eps[a], 0)
        X = ex.vadd(ea, ex.vscale(eps, fa))
        Y = ex.vscale(ex.I, ex.vsub(ea, ex.vscale(eps, fa)))
        name = ",".join(map(str, a))
        vecs += [X, Y]
        tags += [f"X({name})", f"Y({name})"]
        owner += [(a, "X"), (a, "Y")]
    return vecs, tags, owner


def _change_of_basis(vecs):
    n = len(vecs)
    P = DomainMatrix([[vecs[j][i] for j in range(n)] for i in range(n)], (n, n), QQ_I)
    return P.inv().to_list()


def real_algebra(rf: RealFormData):
    """LieAlgebra of the real form in the basis (ih_k, X_a, Y_a) plus coordinate maps."""
    vecs, tags, owner = _real_basis(rf)
    n = len(vecs)
    Pinv = _change_of_basis(vecs)
    to_real = lambda v: ex.matvec(Pinv, v)
    table = {}
    for p in range(n):
        for q in range(n):
            c = to_real(rf.bd.bracket(vecs[p], vecs[q]))
            if any(c):
                if any(x.y for x in c):
                    raise AssertionError("bracket of real vectors is not real")
                table[(p, q)] = [(k, x) for k, x in enumerate(c) if x]
    la = LieAlgebra(n, table, tags)
    return la, vecs, owner, to_real


def flag_datum(gd: GradedDecomposition, name: str | None = None) -> HomogeneousDatum:
    """Canonical flag domain with superhorizontal distribution as a datum.

    j acts on each root plane by j X = -Y, j Y = X, which makes the
    negative-level root vectors the +i eigenvectors (holomorphic directions).
    """
    rf = gd.rf
    if rf is None:
        raise DomainError("grading must carry a real form")
    la, vecs, owner, to_real = real_algebra(rf)
    n = la.dim
    v, m, g1 = [], [], []
    Jm = [[ZERO] * n for _ in range(n)]
    for idx, o in enumerate(owner):
        if o is None or gd.levels[o[0]] == 0:
            v.append(ex.unit(n, idx))
            continue
        m.append(ex.unit(n, idx))
        if abs(gd.levels[o[0]]) == 1:
            g1.append(ex.unit(n, idx))
        if o[1] == "X":
            Jm[idx + 1][idx] = QQ_I(-1, 0)      # j X = -Y
        else:
            Jm[idx - 1][idx] = ONE               # j Y = X
    T = [[ZERO] * n for _ in range(n)]
    for idx in range(n):
        img = to_real(rf.theta(vecs[idx]))
        for r in range(n):
            T[r][idx] = img[r]
    labels = {"roots": owner, "levels": dict(gd.levels), "cartan_type": gd.bd.rd.cartan_type}
    as_t = lambda M: tuple(tuple(r) for r in M)
    return HomogeneousDatum(la=la, v=tuple(map(tuple, v)), m=tuple(map(tuple, m)), j=as_t(Jm),
                            g1R=tuple(map(tuple, g1)), theta=as_t(T),
                            name=name or f"flag({gd.bd.rd.cartan_type})", labels=labels)


def _plane_indices(hd: HomogeneousDatum, root) -> tuple:
    owner = hd.labels["roots"]
    return owner.index((tuple(root), "X")), owner.index((tuple(root), "Y"))


def flip_j_on_plane(hd: HomogeneousDatum, root, g1R_roots=None, name=None) -> HomogeneousDatum:
    """Reverse the sign of j on the plane of ``root`` (optionally reassign g1R)."""
    ix, iy = _plane_indices(hd, root)
    J = [list(r) for r in hd.j]
    J[iy][ix], J[ix][iy] = -J[iy][ix], -J[ix][iy]
    out = replace(hd, j=tuple(tuple(r) for r in J), name=name or f"{hd.name}-flip{root}")
    return with_g1R_roots(out, g1R_roots) if g1R_roots is not None else out


def with_g1R_roots(hd: HomogeneousDatum, roots) -> HomogeneousDatum:
    """Replace g1R by the sum of the given root planes."""
    g1 = [tuple(ex.unit(hd.dim, i)) for a in roots for i in _plane_indices(hd, a)]
    return replace(hd, g1R=tuple(g1))


def realify(la: LieAlgebra, tags=None) -> LieAlgebra:
    """Underlying real algebra of a complex one: basis b_k then i b_k."""
    n = la.dim
    table = {}
    for (p, q), terms in la.table.items():
        for (pp, qq_, fac) in ((p, q, ONE), (p + n, q, ex.I), (p, q + n, ex.I), (p + n, q + n, QQ_I(-1, 0))):
            out = {}
            for k, c in terms:
                c = c * fac
                if c.x:
                    out[k] = out.get(k, ZERO) + QQ_I(c.x, 0)
                if c.y:
                    out[k + n] = out.get(k + n, ZERO) + QQ_I(c.y, 0)
            table[(pp, qq_)] = [(k, c) for k, c in out.items() if c]
    t = list(la.tags) + [f"i*{s}" for s in la.tags]
    return LieAlgebra(2 * n, table, tags or t)


def sl2c_real_datum() -> HomogeneousDatum:
    """sl(2, C) as a real algebra with v = 0 and j = multiplication by i."""
    from .lie_core import build_normalized_basis, build_root_system
    bd = build_normalized_basis(build_root_system("A1"))
    la = realify(bd.algebra)
    n = la.dim            # 6: e, f, h, ie, if, ih  (root order (-1,), (1,), h)
    h = n // 2
    J = [[ZERO] * n for _ in range(n)]
    for k in range(h):
        J[k + h][k] = ONE            # j b = i b
        J[k][k + h] = QQ_I(-1, 0)    # j (i b) = -b
    # theta(X) = -X^*: e_a -> -e_-a, h -> -h, conjugate-linear in i
    ie, ife = bd.root_index[(1,)], bd.root_index[(-1,)]
    hh = bd.cartan_slots[0]
    T = [[ZERO] * n for _ in range(n)]
    T[ife][ie] = T[ie][ife] = QQ_I(-1, 0)
    T[hh][hh] = QQ_I(-1, 0)
    T[ife + h][ie + h] = T[ie + h][ife + h] = ONE
    T[hh + h][hh + h] = ONE
    g1 = [ex.unit(n, ife), ex.unit(n, ife + h)]
    as_t = lambda M: tuple(tuple(r) for r in M)
    return HomogeneousDatum(la=la, v=(), m=tuple(tuple(ex.unit(n, i)) for i in range(n)), j=as_t(J),
                            g1R=tuple(map(tuple, g1)), theta=as_t(T), name="sl(2,C) as real")


def su2_datum() -> HomogeneousDatum:
    """Compact su(2) with v = torus and j the standard structure on the root plane."""
    from .lie_core import apply_real_form, build_normalized_basis, build_root_system
    from .grading import grade, grading_element
    rd = build_root_system("A1")
    bd = build_normalized_basis(rd)
    rf = apply_real_form(bd, {(1,): -1})
    gd = grade(bd, grading_element(rd))
    gd = GradedDecomposition(bd=gd.bd, T=gd.T, levels=gd.levels, depth=gd.depth, spaces=gd.spaces,
                             v_roots=gd.v_roots, rf=rf)
    return flag_datum(gd, name="su(2)")


def heisenberg_line_datum() -> HomogeneousDatum:
    """h3 + R with j x1 = x4, j x2 = x3 and g1R = span(x1, x2); [x1, j x1] = 0."""
    table = {(0, 1): [(2, ONE)], (1, 0): [(2, QQ_I(-1, 0))]}
    la = LieAlgebra(4, table, ["x1", "x2", "x3", "x4"])
    J = [[ZERO] * 4 for _ in range(4)]
    J[3][0] = ONE               # x1 -> x4
    J[0][3] = QQ_I(-1, 0)       # x4 -> -x1
    J[2][1] = ONE               # x2 -> x3
    J[1][2] = QQ_I(-1, 0)       # x3 -> -x2
    as_t = lambda M: tuple(tuple(r) for r in M)
    return HomogeneousDatum(la=la, v=(), m=tuple(tuple(ex.unit(4, i)) for i in range(4)), j=as_t(J),
                            g1R=(tuple(ex.unit(4, 0)), tuple(ex.unit(4, 1))), name="h3+R")


def k1_datum() -> HomogeneousDatum:
    """su(2,1)/T with j reversed on the alpha_1 plane; g1R meets k."""
    from .grading import flag_domain
    hd = flag_datum(flag_domain("A2"))
    return flip_j_on_plane(hd, (1, 0), g1R_roots=[(1, 0), (1, 1)], name="su(2,1) k1 fixture")


def nonintegrable_datum() -> HomogeneousDatum:
    """su(2,1)/T with j reversed on the highest-root plane only."""
    from .grading import flag_domain
    hd = flag_datum(flag_domain("A2"))
    return flip_j_on_plane(hd, (1, 1), name="su(2,1) flipped highest root")


# ---------------------------------------------------------------------------
# j axioms

def _project_out(hd: HomogeneousDatum, x):
    """Component of x in m along the splitting g = v + m."""
    cols = list(hd.v) + list(hd.m)
    c = ex.solve([list(v) for v in cols], x)
    nv = len(hd.v)
    return ex.lincomb(c[nv:], hd.m, hd.dim)


def _first(pairs):
    """First (witness, defect) with a nonzero defect, else None."""
    for w, d in pairs:
        if d:
            return w
    return None


def validate_j_axioms(hd: HomogeneousDatum) -> dict:
    """Exact checks of j on m; each failing axiom records a witness input."""
    n = hd.dim
    v, m, g1 = [list(x) for x in hd.v], [list(x) for x in hd.m], [list(x) for x in hd.g1R]
    out = {}

    def integrability():
        for x, y in itertools.combinations(m, 2):
            jx, jy = hd.J(x), hd.J(y)
            rhs = ex.vadd(ex.vadd(hd.bracket(x, y), hd.J(hd.bracket(jx, y))), hd.J(hd.bracket(x, jy)))
            diff = ex.vsub(hd.bracket(jx, jy), rhs)
            yield (x, y), any(_project_out(hd, diff)) if any(diff) else False

    checks = {
        "splitting": [(None, not (ex.rank(v + m, n) == n and len(v) + len(m) == n))],
        "v_subalgebra": (((a, b), not ex.contains(v, hd.bracket(a, b))) for a in v for b in v),
        "v_m_invariant": (((a, b), not ex.contains(m, hd.bracket(a, b))) for a in v for b in m),
        "j_kills_v": ((a, any(hd.J(a))) for a in v),
        "j_preserves_m": ((b, not ex.contains(m, hd.J(b))) for b in m),
        "j_squared": ((b, hd.J(hd.J(b)) != _neg(b)) for b in m),
        "j_equivariant": (((a, b), hd.bracket(a, hd.J(b)) != hd.J(hd.bracket(a, b))) for a in v for b in m),
        "integrable": integrability(),
        "g1R_in_m": ((b, not ex.contains(m, b)) for b in g1),
        "g1R_v_invariant": (((a, b), not ex.contains(g1, hd.bracket(a, b))) for a in v for b in g1),
    }
    witnesses = {}
    for key, gen in checks.items():
        w = _first(gen)
        out[key] = w is None
        if w is not None:
            witnesses[key] = w
    out["ok"] = all(out[k] for k in checks)
    out["failed"] = [k for k in checks if not out[k]]
    out["witnesses"] = witnesses
    return out


# ---------------------------------------------------------------------------
# no complex line

def check_no_complex_line(hd: HomogeneousDatum, opt_config: dict | None = None) -> dict:
    """min |[x, jx]| over the unit sphere of g1R."""
    cfg = {"restarts": 16, "max_iter": 3000, "tol": 1e-10, "seed": 0, "pass_tol": 1e-8, **(opt_config or {})}
    g1 = [np.array([float(c.x) for c in b]) for b in hd.g1R]
    if not g1:
        return {"pass": True, "degenerate": True, "min": None, "witness": None}
    n = hd.dim
    # inner product on g: -B(x, theta y) when theta is known, else coordinates
    if hd.theta is not None and _is_semisimple(hd):
        K = np.array([[float(c.x) for c in r] for r in hd.la.killing_matrix])
        Th = np.array([[float(c.x) for c in r] for r in hd.theta])
        M = -K @ Th
        M = 0.5 * (M + M.T)
        norm_name = "-B(x, theta y)"
    else:
        M = np.eye(n)
        norm_name = "coordinates"
    G = np.array(g1)                                 # (p, n)
    L = np.linalg.cholesky(G @ M @ G.T)
    Bon = np.linalg.solve(L, G)                      # orthonormal basis rows
    C = np.real(hd.la.dense_tensor())
    Jm = np.array([[float(c.x) for c in r] for r in hd.j])
    JB = Bon @ Jm.T                                  # rows: j b_p
    W = np.einsum("pi,qj,ijk->pqk", Bon, JB, C)      # [b_p, j b_q]

    def Q(a):
        return np.einsum("p,q,pqk->k", a, a, W)

    def f(a):
        q = Q(a)
        return float(-(q @ M @ q))

    def grad(a):
        q = Q(a)
        dQ = np.einsum("q,rqk->rk", a, W) + np.einsum("q,qrk->rk", a, W)
        return -2.0 * dQ @ (M @ q)

    res = sphere_maximize(f, grad, len(g1), restarts=int(cfg["restarts"]), max_iter=int(cfg["max_iter"]),
                          tol=float(cfg["tol"]), seed=int(cfg["seed"]))
    mn = math.sqrt(max(0.0, -res.best.value))
    x = res.best.x @ Bon
    ok = mn > cfg["pass_tol"]
    witness = None
    if not ok:
        witness = [float(c) for c in x]
    return {"pass": ok, "degenerate": False, "min": mn, "norm": norm_name, "witness": witness,
            "argmin": [float(c) for c in x], "spread": res.spread}


# ---------------------------------------------------------------------------
# classification

def _killing_det(hd):
    K = hd.la.killing_matrix
    return DomainMatrix([list(r) for r in K], (hd.dim, hd.dim), QQ_I).det()


def _is_semisimple(hd) -> bool:
    return bool(_killing_det(hd))


def largest_ideal_in(hd: HomogeneousDatum, sub) -> list:
    """Largest ideal of g contained in span(sub)."""
    n = hd.dim
    I = ex.span([list(x) for x in sub], n) if sub else []
    while I:
        # y lies in span(I) iff w . y = 0 for every w annihilating I
        left = ex.nullspace(I, n)
        rows = []
        for b in range(n):
            imgs = [hd.bracket(ex.unit(n, b), x) for x in I]
            for w in left:
                row = [sum((wi * yi for wi, yi in zip(w, y)), ZERO) for y in imgs]
                if any(row):
                    rows.append(row)
        if not rows:
            return I
        coeffs = ex.nullspace(rows, len(I))
        I = ex.span([ex.lincomb(c, I, n) for c in coeffs], n) if coeffs else []
    return []


def complex_part(hd: HomogeneousDatum) -> list:
    """{x : [jx, y] = j[x, y] for all y}; nonzero for complex algebras with j = i."""
    n = hd.dim
    rows = []
    for y in range(n):
        ey = ex.unit(n, y)
        cols = []
        for xi in range(n):
            ex_ = ex.unit(n, xi)
            cols.append(ex.vsub(hd.bracket(hd.J(ex_), ey), hd.J(hd.bracket(ex_, ey))))
        for r in range(n):
            row = [cols[xi][r] for xi in range(n)]
            if any(row):
                rows.append(row)
    return ex.span(ex.nullspace(rows, n), n) if rows else [ex.unit(n, i) for i in range(n)]


def compact_part(hd: HomogeneousDatum) -> list:
    """{x in k : [x, q] = 0}: the sum of compact ideals of a semisimple g."""
    k, q = hd.k_basis(), hd.q_basis()
    n = hd.dim
    if not k:
        return []
    rows = []
    for b in q:
        imgs = [hd.bracket(x, b) for x in k]
        for r in range(n):
            row = [img[r] for img in imgs]
            if any(row):
                rows.append(row)
    coeffs = ex.nullspace(rows, len(k)) if rows else [ex.unit(len(k), i) for i in range(len(k))]
    return ex.span([ex.lincomb(c, k, n) for c in coeffs], n) if coeffs else []


def section5_grading(hd: HomogeneousDatum) -> GradedSpaces:
    """g_1 = {x - i jx}, g_-1 its conjugate, higher levels as Hermitian complements."""
    n = hd.dim
    v = [list(x) for x in hd.v]
    g1 = ex.span([ex.vsub(list(x), ex.vscale(ex.I, hd.J(list(x)))) for x in hd.g1R], n)
    gm1 = ex.span([ex.vconj(x) for x in g1], n)
    spaces = {0: ex.span(v, n) if v else [], 1: g1, -1: gm1}
    for sign, gen in ((1, g1), (-1, gm1)):
        F = ex.sum_spaces(spaces[0], gen)
        prev = gen
        l = 1
        while True:
            brs = [hd.bracket(a, b) for a in gen for b in prev]
            new = ex.sum_spaces(F, [b for b in brs if any(b)])
            if len(new) == len(F):
                break
            l += 1
            comp = ex.complement(new, F)
            spaces[sign * l] = comp
            F, prev = new, comp
    return GradedSpaces(spaces=spaces, bracket=hd.bracket, dim=n)


@dataclass
class Verdict:
    status: str                     # CanonicalSuperhorizontal | Rejected
    reason: str | None = None
    witness: list | None = None
    witness_text: str | None = None
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.status == "CanonicalSuperhorizontal"

    def to_dict(self) -> dict:
        w = [ex.fmt_gauss(c) for c in self.witness] if self.witness and hasattr(self.witness[0], "x") \
            else self.witness
        return {"verdict": self.status, "reason": self.reason, "witness": w,
                "witness_text": self.witness_text, "checks": _jsonable(self.checks), "notes": self.notes}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "x") and hasattr(obj, "y"):
        return ex.fmt_gauss(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return str(obj)


def _reject(reason, witness, hd, checks):
    return Verdict("Rejected", reason, list(witness) if witness is not None else None,
                   hd.describe(witness) if witness is not None else None, checks, [ALMOST_EFFECTIVE_NOTE])


def classify_homogeneous(hd: HomogeneousDatum) -> Verdict:
    checks: dict = {}
    n = hd.dim
    ja = validate_j_axioms(hd)
    checks["j_axioms"] = {k: v for k, v in ja.items() if k != "witnesses"}
    if not ja["ok"]:
        key = ja["failed"][0]
        w = ja["witnesses"][key]
        x = w[0] if isinstance(w, tuple) else w
        v = _reject(f"j axiom fails: {key}", x, hd, checks)
        if isinstance(w, tuple):
            v.witness_text = " , ".join(hd.describe(u) for u in w)
        return v

    # almost effectiveness at the algebra level
    ideal = largest_ideal_in(hd, hd.v)
    checks["ideal_in_v"] = len(ideal)
    if ideal:
        return _reject("v contains a nonzero ideal (not almost effective)", ideal[0], hd, checks)

    # (i) semisimple of noncompact type
    if not _is_semisimple(hd):
        rad = ex.nullspace([list(r) for r in hd.la.killing_matrix], n)
        checks["semisimple"] = False
        return _reject("not semisimple (Killing form degenerate)", rad[0], hd, checks)
    checks["semisimple"] = True
    if hd.theta is None:
        return _reject("no Cartan involution supplied", None, hd, checks)
    if hd.v:
        gram = [[-hd.la.killing(list(a), list(b)) for b in hd.v] for a in hd.v]
        okv, _ = ex.leading_minors_positive(gram)
        checks["v_compact"] = okv
        if not okv:
            return _reject("Killing form not negative definite on v", None, hd, checks)
    cpt = compact_part(hd)
    checks["compact_part_dim"] = len(cpt)
    if cpt:
        return _reject("compact factor", cpt[0], hd, checks)

    # (ii) not a complex Lie algebra
    cx = complex_part(hd)
    checks["complex_part_dim"] = len(cx)
    if cx:
        return _reject("complex Lie algebra", cx[0], hd, checks)

    # (iii) graded decomposition, v^C as the intersection, theta invariance
    gs = section5_grading(hd)
    dims = {l: len(s) for l, s in sorted(gs.spaces.items())}
    checks["grading_dims"] = dims
    if sum(dims.values()) != n:
        return _reject("g1R is not bracket generating", None, hd, checks)
    ge = ex.sum_spaces(*[s for l, s in gs.spaces.items() if l >= 0])
    le = ex.sum_spaces(*[s for l, s in gs.spaces.items() if l <= 0])
    inter = ex.intersection(ge, le)
    checks["parabolic_intersection_is_v"] = len(inter) == len(hd.v) and ex.is_subspace(inter, hd.v)
    if not checks["parabolic_intersection_is_v"]:
        return _reject("g_<=0 and g_>=0 do not meet in v^C", None, hd, checks)
    theta_ok = ex.is_subspace([hd.Theta(x) for x in ge], ge) and ex.is_subspace([hd.Theta(x) for x in le], le)
    checks["theta_invariant"] = theta_ok
    if not theta_ok:
        return _reject("g_>=0 or g_<=0 is not theta-invariant", None, hd, checks)
    gb = validate_graded_brackets(gs)
    checks["graded_brackets"] = gb["ok"]

    # (iv) k1 = k cap g1R
    k1 = ex.intersection(hd.k_basis(), [list(x) for x in hd.g1R])
    checks["k1_dim"] = len(k1)
    if k1:
        w = _nice_vector(k1[0])
        return _reject("k1 = k cap g1R is nonzero", w, hd, checks)

    # (v) superhorizontal match: grading element in v^C and parity
    T = _grading_element(hd, gs)
    checks["grading_element_found"] = T is not None
    if T is None:
        return _reject("grading is not induced by an element of v^C", None, hd, checks)
    parity = all(hd.Theta(x) == (x if l % 2 == 0 else _neg(x)) for l, s in gs.spaces.items() for x in s)
    checks["parity"] = parity
    if not parity:
        return _reject("level parity does not match k/q", None, hd, checks)
    return Verdict("CanonicalSuperhorizontal", None, None, None, checks,
                   [ALMOST_EFFECTIVE_NOTE, "grading element T has [T, x] = l x on g_l"])


def _nice_vector(x):
    """Scale a vector so its first nonzero entry is 1."""
    first = next(c for c in x if c)
    return ex.vscale(ONE / first, x)


def _grading_element(hd, gs):
    v = [list(x) for x in hd.v]
    if not v:
        return None if any(l for l, s in gs.spaces.items() if s) else []
    n = hd.dim
    rows, rhs = [], []
    for l, s in gs.spaces.items():
        for x in s:
            imgs = [hd.bracket(b, x) for b in v]
            for r in range(n):
                rows.append([img[r] for img in imgs])
                rhs.append(QQ_I(l, 0) * x[r])
    cols = [[row[p] for row in rows] for p in range(len(v))]
    c = ex.solve(cols, rhs)
    return None if c is None else ex.lincomb(c, v, n)


# ---------------------------------------------------------------------------
# abelian ideal lemmas

def validate_abelian_ideal_lemmas(la: LieAlgebra, r, v=None, hd: HomogeneousDatum | None = None) -> dict:
    n = la.dim
    r = ex.span([list(x) for x in r], n) if r else []
    basis = [ex.unit(n, i) for i in range(n)]
    if not all(ex.contains(r, la.bracket(b, x)) for b in basis for x in r):
        raise InvalidIdeal("r is not an ideal")
    if any(any(la.bracket(x, y)) for x in r for y in r):
        raise InvalidIdeal("r is not abelian")
    gg = ex.span([la.bracket(a, b) for a in basis for b in basis if any(la.bracket(a, b))], n)
    lhs = ex.intersection(gg, r)
    rg = ex.span([la.bracket(x, b) for x in r for b in basis if any(la.bracket(x, b))], n)
    same = len(lhs) == len(rg) and ex.is_subspace(lhs, rg)
    v = [list(x) for x in (v if v is not None else (hd.v if hd is not None else []))]
    rv = ex.intersection(r, v) if r and v else []
    rep = {"r_cap_v_zero": not rv, "gg_cap_r": lhs, "r_g": rg, "bracket_identity": same,
           "dims": {"gg_cap_r": len(lhs), "r_g": len(rg)}}
    if hd is not None:
        r1 = ex.intersection(r, [list(x) for x in hd.g1R])
        sub = ex.sum_spaces(r1, [hd.J(x) for x in r1]) if r1 else []
        closed = all(ex.contains(sub, hd.bracket(a, b)) for a in sub for b in sub)
        j_closed = all(ex.contains(sub, hd.J(a)) for a in sub)
        rep["r1_plus_jr1"] = {"dim": len(sub), "subalgebra": closed, "j_invariant": j_closed}
    rep["ok"] = rep["r_cap_v_zero"] and same
    return rep


def heisenberg_algebra() -> LieAlgebra:
    """x, y, z with [x, y] = z."""
    return LieAlgebra(3, {(0, 1): [(2, ONE)], (1, 0): [(2, QQ_I(-1, 0))]}, ["x", "y", "z"])


def affine_line_algebra() -> LieAlgebra:
    """x, y with [x, y] = y."""
    return LieAlgebra(2, {(0, 1): [(1, ONE)], (1, 0): [(1, QQ_I(-1, 0))]}, ["x", "y"])


# ---------------------------------------------------------------------------
# Euclidean charts: invertible minor and the constant C_N

def _frame_exprs(cd: ChartDistribution):
    return sp.Matrix([[cd.frame[j].comps[i].as_expr() for j in range(cd.d)] for i in range(cd.n)])


def _find_zero(det, g, box: float, rng, tries: int = 64):
    """Locate a zero of a nonconstant polynomial, inside the box when possible."""
    free = sorted(det.free_symbols, key=lambda s: g.index(s))
    fallback = None
    for t in range(tries):
        var = free[t % len(free)]
        others = {s: (0 if t < len(free) else complex(*(rng.uniform(-1, 1, 2) * min(box, 1.0) * 0.5)))
                  for s in g if s != var}
        uni = sp.Poly(sp.expand(det.subs(others)), var)
        if uni.degree() < 1:
            continue
        roots = np.roots([complex(c) for c in uni.all_coeffs()])
        for rt in roots:
            pt = [complex(others.get(s, 0)) if s != var else complex(rt) for s in g]
            if fallback is None:
                fallback = pt
            if max(abs(c) for c in pt) < box:
                return pt
    return fallback


def check_forstneric_assumption(cd: ChartDistribution, grid: int = 9, seed: int = 0) -> dict:
    g = cd.frame[0].gens
    X = _frame_exprs(cd)
    rng = np.random.default_rng(seed)
    report = {"minors": [], "verdict": "fail", "kind": "fail", "rows": None}
    best_sampled = None
    for rows in itertools.combinations(range(cd.n), cd.d):
        det = sp.expand(X.extract(list(rows), list(range(cd.d))).det())
        entry = {"rows": list(rows), "determinant": str(det)}
        if det == 0:
            entry["status"] = "identically zero"
        elif not det.free_symbols:
            entry["status"] = "constant"
            report["minors"].append(entry)
            report.update(verdict="proven", kind="proven", rows=list(rows), determinant=str(det))
            return report
        else:
            zero = _find_zero(det, list(g), cd.box, rng)
            inside = zero is not None and max(abs(c) for c in zero) < cd.box
            entry["zero"] = [[c.real, c.imag] for c in zero] if zero else None
            if inside:
                entry["status"] = "vanishes in the chart"
            else:
                # bounded chart and no zero located: sample the box honestly
                f = sp.lambdify(g, det, "numpy")
                pts = np.linspace(-1, 1, grid)
                mins = np.inf
                for idx in itertools.product(pts, repeat=2 * cd.n):
                    z = [complex(idx[2 * k], idx[2 * k + 1]) * cd.box for k in range(cd.n)]
                    if max(abs(c) for c in z) < cd.box:
                        mins = min(mins, abs(complex(f(*z))))
                entry["status"] = "sampled"
                entry["min_abs_sampled"] = float(mins)
                if mins > 0 and best_sampled is None:
                    best_sampled = entry
        report["minors"].append(entry)
    if best_sampled is not None:
        report.update(verdict="sampled", kind="sampled", rows=best_sampled["rows"],
                      note="nonvanishing observed on a grid only; this is not a proof")
    else:
        first = next((m for m in report["minors"] if m.get("zero")), None)
        report["zero"] = first["zero"] if first else None
    return report


def compute_CN(cd: ChartDistribution, N: int, samples: int | None = None, safety: float = 1.01) -> dict:
    """C_N = safety * (2^N + d 2^{2N} sup |((pi_4)^{-1} pi_3)_{ji}|) over 2^N Delta^n.

    The sup is taken on the distinguished boundary torus (maximum principle).
    """
    n, d = cd.n, cd.d
    r = 2.0 ** N
    m = samples or (16 if n <= 3 else 8)
    ang = np.exp(2j * np.pi * np.arange(m) / m)
    sup = 0.0
    for idx in itertools.product(range(m), repeat=n):
        z = [r * ang[i] for i in idx]
        try:
            B = cd.coframe_block(z)
        except np.linalg.LinAlgError:
            raise UnboundedEntry(f"frame block singular at {z}") from None
        val = float(np.max(np.abs(B))) if B.size else 0.0
        if not math.isfinite(val):
            raise UnboundedEntry("entry is not finite on the sampled torus")
        sup = max(sup, val)
    formula = r + d * r * r * sup
    return {"N": N, "sup": sup, "formula": formula, "C_N": safety * formula, "safety": safety,
            "samples": m ** n, "kind": "sampled sup (distinguished boundary)"}
