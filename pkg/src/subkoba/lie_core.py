"""Root systems, normalized root-space bases and real forms (types A-D, rank <= 4).

Everything here is exact.  Structure constants are rationals; vectors of the
complexified algebra are lists of Gaussian rationals in the basis

    e_alpha (alpha in ``RootDatum.roots`` order), then h_1 .. h_r

where ``h_i`` are the simple coroots of the Chevalley normalization.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Sequence

import numpy as np

from . import exact as ex
from .errors import InvalidRealForm, UnsupportedType
from .exact import ONE, QQ, QQ_I, ZERO

Root = tuple  # integer coordinates over the simple roots

_SUPPORTED = {"A": range(1, 5), "B": range(2, 5), "C": range(2, 5), "D": range(3, 5)}


# ---------------------------------------------------------------------------
# Lie algebras given by structure constants

class LieAlgebra:
    """Finite-dimensional Lie algebra over Q(i) given by a sparse table.

    ``table[(i, j)]`` lists ``(k, c)`` with ``[b_i, b_j] = sum c b_k``.
    """

    def __init__(self, dim: int, table: Mapping, tags: Sequence[str] | None = None):
        self.dim = dim
        self.table = {key: [(k, ex.gauss(c)) for k, c in val if c]
                      for key, val in table.items()}
        self.table = {k: v for k, v in self.table.items() if v}
        self.tags = list(tags) if tags is not None else [f"b{i}" for i in range(dim)]
        self._killing = None
        self._dense = None

    def bracket(self, x, y):
        out = [ZERO] * self.dim
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        table = self.table
        for i, a in xs:
            for j, b in ys:
                terms = table.get((i, j))
                if terms:
                    ab = a * b
                    for k, c in terms:
                        out[k] += ab * c
        return out

    def basis_bracket(self, i: int, j: int):
        out = [ZERO] * self.dim
        for k, c in self.table.get((i, j), ()):
            out[k] += c
        return out

    def ad_matrix(self, x):
        """Matrix (rows = output coordinates) of ad x."""
        cols = [self.bracket(x, ex.unit(self.dim, j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    @property
    def killing_matrix(self):
        if self._killing is None:
            n = self.dim
            ad = []
            for i in range(n):
                d = {}
                for j in range(n):
                    for k, c in self.table.get((i, j), ()):
                        d[(k, j)] = d.get((k, j), ZERO) + c
                ad.append(d)
            B = [[ZERO] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    s = ZERO
                    adj = ad[j]
                    for (k, l), c in ad[i].items():
                        c2 = adj.get((l, k))
                        if c2:
                            s += c * c2
                    B[i][j] = B[j][i] = s
            self._killing = B
        return self._killing

    def killing(self, x, y):
        B = self.killing_matrix
        s = ZERO
        for i, a in enumerate(x):
            if a:
                row = B[i]
                for j, b in enumerate(y):
                    if b and row[j]:
                        s += a * row[j] * b
        return s

    def dense_tensor(self) -> np.ndarray:
        """Complex array C[i, j, k] of structure constants (numeric work)."""
        if self._dense is None:
            C = np.zeros((self.dim,) * 3, dtype=complex)
            for (i, j), terms in self.table.items():
                for k, c in terms:
                    C[i, j, k] = ex.to_complex(c)
            self._dense = C
        return self._dense

    def killing_dense(self) -> np.ndarray:
        return np.array([[ex.to_complex(c) for c in row] for row in self.killing_matrix])

    def jacobi_violations(self, limit: int | None = None):
        """Basis triples (i, j, k) where the Jacobi identity fails."""
        bad = []
        n = self.dim
        e = [ex.unit(n, i) for i in range(n)]
        br = {(i, j): self.basis_bracket(i, j) for i in range(n) for j in range(n)}
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    s = ex.vadd(ex.vadd(self.bracket(br[i, j], e[k]),
                                        self.bracket(br[j, k], e[i])),
                                self.bracket(br[k, i], e[j]))
                    if any(s):
                        bad.append((i, j, k))
                        if limit and len(bad) >= limit:
                            return bad
        return bad

    def antisymmetry_violations(self):
        n = self.dim
        return [(i, j) for i in range(n) for j in range(i, n)
                if any(ex.vadd(self.basis_bracket(i, j), self.basis_bracket(j, i)))]

    def killing_invariance_violations(self):
        """Triples with B([x,y],z) + B(y,[x,z]) != 0 on basis vectors."""
        n = self.dim
        e = [ex.unit(n, i) for i in range(n)]
        br = {(i, j): self.basis_bracket(i, j) for i in range(n) for j in range(n)}
        bad = []
        for i in range(n):
            for j in range(n):
                for k in range(j, n):
                    lhs = self.killing(br[i, j], e[k]) + self.killing(e[j], br[i, k])
                    if lhs:
                        bad.append((i, j, k))
        return bad

    def to_dict(self) -> dict:
        rows = []
        for (i, j), terms in sorted(self.table.items()):
            for k, c in terms:
                rows.append([i, j, k, ex.fmt_gauss(c)])
        return {"dim": self.dim, "tags": self.tags, "structure": rows}

    @classmethod
    def from_dict(cls, data: Mapping) -> "LieAlgebra":
        table: dict = {}
        for i, j, k, c in data["structure"]:
            table.setdefault((int(i), int(j)), []).append((int(k), ex.parse_gauss(c)))
        return cls(int(data["dim"]), table, data.get("tags"))


# ---------------------------------------------------------------------------
# root systems

@dataclass(frozen=True)
class RootDatum:
    cartan_type: str
    family: str
    rank: int
    cartan_matrix: tuple  # a[i][j] = <alpha_i^vee, alpha_j>
    roots: tuple          # lexicographically sorted coordinate tuples
    positive: tuple       # flags aligned with ``roots``
    pairing: tuple        # (alpha_i, alpha_j) as exact rationals

    @property
    def positive_roots(self) -> list:
        return [a for a, p in zip(self.roots, self.positive) if p]

    @property
    def negative_roots(self) -> list:
        return [a for a, p in zip(self.roots, self.positive) if not p]

    @property
    def simple_roots(self) -> list:
        return [tuple(int(i == k) for i in range(self.rank)) for k in range(self.rank)]

    def is_root(self, a) -> bool:
        return tuple(a) in self._root_set

    @property
    def _root_set(self):
        return frozenset(self.roots)

    def inner(self, a, b):
        s = QQ(0)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        s += ai * bj * self.pairing[i][j]
        return s

    def coroot_pairing(self, beta, i: int) -> int:
        """<beta, alpha_i^vee>."""
        return sum(c * self.cartan_matrix[i][j] for j, c in enumerate(beta))


def parse_cartan_type(cartan_type: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Da-d])\s*_?\s*(\d+)\s*", str(cartan_type))
    if not m:
        raise UnsupportedType(f"cannot parse Cartan type {cartan_type!r}")
    fam, rank = m.group(1).upper(), int(m.group(2))
    if rank not in _SUPPORTED[fam]:
        raise UnsupportedType(f"{fam}{rank} is not supported (rank <= 4; B,C need rank >= 2, D rank >= 3)")
    return fam, rank


def cartan_matrix(family: str, r: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
    for i in range(r - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if family == "B":
        a[r - 1][r - 2] = -2
    elif family == "C":
        a[r - 2][r - 1] = -2
    elif family == "D":
        a[r - 2][r - 1] = a[r - 1][r - 2] = 0
        a[r - 3][r - 1] = a[r - 1][r - 3] = -1
    return a


def _squared_lengths(family: str, r: int) -> list[int]:
    if family == "B":
        return [2] * (r - 1) + [1]
    if family == "C":
        return [1] * (r - 1) + [2]
    return [2] * r


def build_root_system(cartan_type: str) -> RootDatum:
    """All roots of a classical type via root strings over the simple roots."""
    fam, r = parse_cartan_type(cartan_type)
    a = cartan_matrix(fam, r)
    simple = [tuple(int(i == k) for i in range(r)) for k in range(r)]
    pos = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                # p = length of the alpha_i-string below beta
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in pos:
                        p += 1
                    else:
                        break
                q = p - sum(c * a[i][j] for j, c in enumerate(beta))
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in pos:
                        pos.add(up)
                        nxt.append(up)
        layer = nxt
    roots = sorted(pos | {tuple(-c for c in b) for b in pos})
    lengths = _squared_lengths(fam, r)
    pairing = tuple(tuple(QQ(a[i][j] * lengths[i], 2) for j in range(r)) for i in range(r))
    return RootDatum(
        cartan_type=f"{fam}{r}", family=fam, rank=r,
        cartan_matrix=tuple(tuple(row) for row in a),
        roots=tuple(roots),
        positive=tuple(all(c >= 0 for c in b) for b in roots),
        pairing=pairing,
    )


# ---------------------------------------------------------------------------
# matrix realizations

def _form_matrix(family: str, r: int):
    if family == "A":
        return r + 1, None
    if family in ("B", "D"):
        N = 2 * r + 1 if family == "B" else 2 * r
        return N, np.fliplr(np.eye(N, dtype=np.int64))
    K = np.fliplr(np.eye(r, dtype=np.int64))
    Z = np.zeros((r, r), dtype=np.int64)
    return 2 * r, np.block([[Z, K], [-K, Z]])


def _constraint_rows(N: int, J) -> list[list[int]]:
    """Linear conditions on vec(X) (index m*N+p) defining the matrix algebra."""
    if J is None:
        return [[1 if (idx // N == idx % N) else 0 for idx in range(N * N)]]
    rows = []
    for p in range(N):
        for q in range(N):
            row = [0] * (N * N)
            for m in range(N):
                if J[m, q]:
                    row[m * N + p] += int(J[m, q])   # (X^T J)[p,q]
                if J[p, m]:
                    row[m * N + q] += int(J[p, m])   # (J X)[p,q]
            if any(row):
                rows.append(row)
    return rows


def _restricted_nullspace(rows, positions, N):
    cols = [m * N + p for m, p in positions]
    sub = [[ex.gauss(row[c]) for c in cols] for row in rows]
    sub = [s for s in sub if any(s)]
    if not sub:
        return [ex.unit(len(cols), i) for i in range(len(cols))]
    return ex.nullspace(sub, len(cols))


def _integral(vec) -> list[int]:
    """Scale a rational vector to coprime integers with first nonzero positive."""
    fr = [ex.to_fraction(ex.real_part(c)) for c in vec]
    den = 1
    for f in fr:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    ints = [v // g for v in ints]
    first = next(v for v in ints if v)
    return [v if first > 0 else -v for v in ints]


def _square_split(b) -> tuple:
    """Return (s, m) with b = s^2 * m, s > 0 rational, m a squarefree integer."""
    p, q = int(b.numerator), int(b.denominator)
    n = p * q
    s0, m = 1, 1
    k = 2
    rem = n
    while k * k <= rem:
        e = 0
        while rem % k == 0:
            rem //= k
            e += 1
        s0 *= k ** (e // 2)
        if e % 2:
            m *= k
        k += 1
    m *= rem
    return QQ(s0, q), m


# ---------------------------------------------------------------------------
# normalized basis

@dataclass(frozen=True, eq=False)
class BasisData:
    """Normalized root-space basis of the complex simple Lie algebra.

    ``b[alpha] = B(e_alpha, e_-alpha)`` is a squarefree positive integer; it
    equals 1 whenever an exact rational rescaling allows it.  All identities
    are stated with these factors (``[e_a, e_-a] = b_a h_a``).
    """

    rd: RootDatum
    algebra: LieAlgebra
    root_index: dict
    cartan_slots: tuple
    b: dict
    N: dict
    h_alpha: dict        # root -> paper-normalized h_alpha in coroot coordinates
    alpha_on_cartan: dict  # root -> (alpha(H_1), ..., alpha(H_r))
    matrices: tuple = field(repr=False, default=())

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def killing_matrix(self):
        return self.algebra.killing_matrix

    def e(self, root) -> list:
        return ex.unit(self.dim, self.root_index[tuple(root)])

    def h(self, i: int) -> list:
        return ex.unit(self.dim, self.cartan_slots[i])

    def cartan_vector(self, coords) -> list:
        v = [ZERO] * self.dim
        for slot, c in zip(self.cartan_slots, coords):
            v[slot] = ex.gauss(c)
        return v

    def h_alpha_vector(self, root) -> list:
        return self.cartan_vector(self.h_alpha[tuple(root)])

    def bracket(self, x, y):
        return self.algebra.bracket(x, y)

    def killing(self, x, y):
        return self.algebra.killing(x, y)

    def to_dict(self) -> dict:
        return {
            "format": "subkoba.basis/1",
            "cartan_type": self.rd.cartan_type,
            "roots": [list(a) for a in self.rd.roots],
            "b": {",".join(map(str, a)): ex.fmt_rational(v) for a, v in self.b.items()},
            "algebra": self.algebra.to_dict(),
            "killing": [[ex.fmt_gauss(c) for c in row] for row in self.killing_matrix],
        }


def _root_tag(a) -> str:
    return "e(" + ",".join(str(c) for c in a) + ")"


def build_normalized_basis(rd: RootDatum) -> BasisData:
    fam, r = rd.family, rd.rank
    N, J = _form_matrix(fam, r)
    rows = _constraint_rows(N, J)

    diag = [(i, i) for i in range(N)]
    Hs = [_integral(v) for v in _restricted_nullspace(rows, diag, N)]
    if len(Hs) != r:
        raise AssertionError("Cartan subalgebra has wrong dimension")

    def weight(i, j):
        return tuple(H[i] - H[j] for H in Hs)

    groups: dict = {}
    for i in range(N):
        for j in range(N):
            if i != j:
                groups.setdefault(weight(i, j), []).append((i, j))

    upper = {}
    for w, pos in groups.items():
        if not all(i < j for i, j in pos):
            continue
        ns = _restricted_nullspace(rows, pos, N)
        if not ns:
            continue
        if len(ns) != 1:
            raise AssertionError("root space is not one-dimensional")
        coeffs = _integral(ns[0])
        M = np.zeros((N, N), dtype=np.int64)
        for (i, j), c in zip(pos, coeffs):
            M[i, j] = c
        upper[w] = M

    def ev(w, Hdiag):  # value of weight w on a diagonal matrix given by entries
        i, j = groups[w][0]
        return Hdiag[i] - Hdiag[j]

    coroot = {}
    for w, M in upper.items():
        Hm = M @ M.T - M.T @ M
        d = np.diag(Hm)
        val = ev(w, d)
        coroot[w] = [QQ(2 * int(x), int(val)) for x in d]

    wts = list(upper)
    wset = set(wts)
    simple = [w for w in wts
              if not any(tuple(a - b for a, b in zip(w, u)) in wset for u in wts)]
    if len(simple) != r:
        raise AssertionError("simple root detection failed")

    def value(w, d):
        i, j = groups[w][0]
        return d[i] - d[j]

    target = [list(row) for row in rd.cartan_matrix]
    order = None
    for perm in itertools.permutations(range(r)):
        ok = all(value(simple[perm[j]], coroot[simple[perm[i]]]) == target[i][j]
                 for i in range(r) for j in range(r))
        if ok:
            order = [simple[p] for p in perm]
            break
    if order is None:
        raise AssertionError("could not match simple roots to the Cartan matrix")

    # simple-root coordinates of every positive weight
    cols = [[ex.gauss(c) for c in w] for w in order]
    mats: dict = {}
    for w, M in upper.items():
        c = ex.solve(cols, [ex.gauss(x) for x in w])
        root = tuple(int(ex.to_fraction(ex.real_part(x))) for x in c)
        mats[root] = M
        mats[tuple(-x for x in root)] = M.T.copy()
    if set(mats) != set(rd.roots):
        raise AssertionError("matrix realization disagrees with the root closure")

    n_roots = len(rd.roots)
    dim = n_roots + r
    cartan_diag = [coroot[w] for w in order]   # simple coroots as diagonals
    basis_mats = [mats[a] for a in rd.roots]
    pivots = [tuple(np.argwhere(M != 0)[0]) for M in basis_mats]
    hcols = [[ex.gauss(x) for x in d] for d in cartan_diag]

    def coords(M) -> list:
        out = [ZERO] * dim
        R = M.astype(object)
        for idx, (P, pv) in enumerate(zip(basis_mats, pivots)):
            c = R[pv]
            if c:
                coef = QQ(int(c), int(P[pv]))
                out[idx] = QQ_I(coef, 0)
                R = R - P.astype(object) * coef
        d = [ex.gauss(R[i, i]) for i in range(N)]
        if any(d):
            c = ex.solve(hcols, d)
            if c is None:
                raise AssertionError("bracket left the algebra")
            for k, ck in enumerate(c):
                out[n_roots + k] = ck
        return out

    cart_mats = [np.diag([x for x in d]).astype(object) for d in cartan_diag]
    all_mats = [M.astype(object) for M in basis_mats] + cart_mats
    table = {}
    for i in range(dim):
        for j in range(dim):
            C = all_mats[i].dot(all_mats[j]) - all_mats[j].dot(all_mats[i])
            if not np.any(C != 0):
                continue
            v = coords(C)
            table[(i, j)] = [(k, c) for k, c in enumerate(v) if c]

    tags = [_root_tag(a) for a in rd.roots] + [f"h{i + 1}" for i in range(r)]
    raw = LieAlgebra(dim, table, tags)
    Braw = raw.killing_matrix
    idx = {a: k for k, a in enumerate(rd.roots)}

    lam = [ONE] * dim
    for a in rd.positive_roots:
        b_raw = ex.real_part(Braw[idx[a]][idx[tuple(-x for x in a)]])
        s, _ = _square_split(b_raw)
        lam[idx[a]] = lam[idx[tuple(-x for x in a)]] = QQ_I(1 / s, 0)

    scaled = {key: [(k, c * lam[key[0]] * lam[key[1]] / lam[k]) for k, c in terms]
              for key, terms in table.items()}
    algebra = LieAlgebra(dim, scaled, tags)
    B = algebra.killing_matrix

    cartan_slots = tuple(range(n_roots, dim))
    alpha_on_cartan = {a: tuple(sum(c * rd.cartan_matrix[k][j] for j, c in enumerate(a))
                                for k in range(r)) for a in rd.roots}
    # h_alpha: B(h_alpha, H_k) = alpha(H_k)
    Bh = [[B[s][t] for t in cartan_slots] for s in cartan_slots]
    h_alpha = {}
    for a in rd.roots:
        sol = ex.solve([[Bh[k][j] for k in range(r)] for j in range(r)],
                       [ex.gauss(v) for v in alpha_on_cartan[a]])
        h_alpha[a] = tuple(ex.real_part(c) for c in sol)

    bvals = {a: ex.real_part(B[idx[a]][idx[tuple(-x for x in a)]]) for a in rd.roots}
    Ntab = {}
    for a in rd.roots:
        for c in rd.roots:
            s = tuple(x + y for x, y in zip(a, c))
            if s in idx:
                terms = dict(algebra.table.get((idx[a], idx[c]), []))
                Ntab[(a, c)] = ex.real_part(terms.get(idx[s], ZERO))

    return BasisData(rd=rd, algebra=algebra, root_index=idx, cartan_slots=cartan_slots,
                     b=bvals, N=Ntab, h_alpha=h_alpha, alpha_on_cartan=alpha_on_cartan,
                     matrices=tuple(all_mats))


def normalization_report(bd: BasisData) -> dict:
    """Exact check of the root-basis normalization, item by item.

    Keys map to lists of violations (empty lists mean the property holds),
    except ``cyclic`` which records the status of the cyclic N-relations.
    """
    rd = bd.rd
    roots = rd.roots
    neg = lambda a: tuple(-x for x in a)
    rep = {"killing_pairing": [], "coroot_bracket": [], "h_alpha_dual": [],
           "vanishing_brackets": [], "root_brackets": [], "antisymmetry": [],
           "cyclic": {"checked": 0, "failed": []}}
    for a in roots:
        for c in roots:
            val = bd.killing(bd.e(a), bd.e(c))
            expect = bd.b[a] if c == neg(a) else 0
            if val != QQ_I(expect, 0):
                rep["killing_pairing"].append((a, c))
        br = bd.bracket(bd.e(a), bd.e(neg(a)))
        if br != ex.vscale(QQ_I(bd.b[a], 0), bd.h_alpha_vector(a)):
            rep["coroot_bracket"].append(a)
        for k in range(rd.rank):
            if bd.killing(bd.h_alpha_vector(a), bd.h(k)) != QQ_I(bd.alpha_on_cartan[a][k], 0):
                rep["h_alpha_dual"].append((a, k))
    for a in roots:
        for c in roots:
            s = tuple(x + y for x, y in zip(a, c))
            br = bd.bracket(bd.e(a), bd.e(c))
            if c == neg(a):
                continue
            if s not in bd.root_index:
                if any(br):
                    rep["vanishing_brackets"].append((a, c))
                continue
            n_ab = bd.N[(a, c)]
            if not n_ab or br != ex.vscale(QQ_I(n_ab, 0), bd.e(s)):
                rep["root_brackets"].append((a, c))
            if bd.N[(neg(a), neg(c))] != -n_ab:
                rep["antisymmetry"].append((a, c))
            # zero-sum triple (a, c, g): N_{a,c} b_g = N_{c,g} b_a = N_{g,a} b_c
            g = neg(s)
            lhs = n_ab * bd.b[g]
            mid = bd.N[(c, g)] * bd.b[a]
            rhs = bd.N[(g, a)] * bd.b[c]
            rep["cyclic"]["checked"] += 1
            if not (lhs == mid == rhs):
                rep["cyclic"]["failed"].append((a, c))
    return rep


# ---------------------------------------------------------------------------
# real forms

@dataclass(frozen=True, eq=False)
class RealFormData:
    """Real form fixed by the antilinear conjugation ``sigma``.

    ``sigma(v) = S conj(v)`` and ``theta(v) = T v`` with the matrices stored
    below; ``eps[alpha]`` is -1 for compact and +1 for noncompact roots.
    """

    bd: BasisData
    eps: dict
    sigma_matrix: tuple
    theta_matrix: tuple
    sigma_u_matrix: tuple
    k_basis: tuple
    q_basis: tuple
    t_basis: tuple

    def sigma(self, v):
        return ex.matvec(self.sigma_matrix, ex.vconj(v))

    def sigma_u(self, v):
        return ex.matvec(self.sigma_u_matrix, ex.vconj(v))

    def theta(self, v):
        return ex.matvec(self.theta_matrix, v)

    def is_compact(self, root) -> bool:
        return self.eps[tuple(root)] == -1

    @property
    def name(self) -> str:
        p = sum(1 for a in self.bd.rd.positive_roots if self.eps[a] == 1)
        return f"{self.bd.rd.cartan_type}[{len(self.q_basis)}nc/{len(self.k_basis)}c]" if p else f"{self.bd.rd.cartan_type}[compact]"

    def to_dict(self) -> dict:
        return {
            "format": "subkoba.realform/1",
            "cartan_type": self.bd.rd.cartan_type,
            "eps": {",".join(map(str, a)): e for a, e in self.eps.items() if all(x >= 0 for x in a)},
            "sigma": [[ex.fmt_gauss(c) for c in row] for row in self.sigma_matrix],
            "theta": [[ex.fmt_gauss(c) for c in row] for row in self.theta_matrix],
        }


def eps_from_simple(rd: RootDatum, noncompact_simple: Sequence[int]) -> dict:
    """Multiplicative labeling where the given simple roots (1-based) are noncompact.

    theta acts on e_alpha by prod over simple roots of (-1)^{c_i} for the
    noncompact ones, and eps = -theta-eigenvalue.
    """
    nc = {i - 1 for i in noncompact_simple}
    out = {}
    for a in rd.positive_roots:
        odd = sum(c for i, c in enumerate(a) if i in nc) % 2
        out[a] = 1 if odd else -1
    return out


def _normalize_eps(rd: RootDatum, eps) -> dict:
    full = {}
    for a in rd.positive_roots:
        key = a
        v = eps.get(key, eps.get(",".join(map(str, a))))
        if v not in (1, -1):
            raise InvalidRealForm(f"epsilon label for root {a} must be +1 or -1, got {v!r}")
        full[a] = v
        full[tuple(-x for x in a)] = v
    return full


def apply_real_form(bd: BasisData, eps: Mapping) -> RealFormData:
    rd = bd.rd
    n = bd.dim
    e_full = _normalize_eps(rd, eps)
    idx = bd.root_index
    S = [[ZERO] * n for _ in range(n)]
    U = [[ZERO] * n for _ in range(n)]
    T = [[ZERO] * n for _ in range(n)]
    for a in rd.roots:
        i, j = idx[a], idx[tuple(-x for x in a)]
        S[j][i] = QQ_I(e_full[a], 0)
        U[j][i] = QQ_I(-1, 0)
        T[i][i] = QQ_I(-e_full[a], 0)
    for s in bd.cartan_slots:
        S[s][s] = QQ_I(-1, 0)
        U[s][s] = QQ_I(-1, 0)
        T[s][s] = ONE

    def sig(M, v):
        return ex.matvec(M, ex.vconj(v))

    units = [ex.unit(n, i) for i in range(n)]
    for i in range(n):
        if sig(S, sig(S, units[i])) != units[i]:
            raise InvalidRealForm("sigma is not involutive")
        if ex.matvec(T, ex.matvec(T, units[i])) != units[i]:
            raise InvalidRealForm("theta is not involutive")
        if sig(S, ex.matvec(T, units[i])) != ex.matvec(T, sig(S, units[i])):
            raise InvalidRealForm("sigma and theta do not commute")
    alg = bd.algebra
    for i in range(n):
        for j in range(i + 1, n):
            lhs = sig(S, alg.basis_bracket(i, j))
            rhs = alg.bracket(sig(S, units[i]), sig(S, units[j]))
            if lhs != rhs:
                raise InvalidRealForm(
                    f"sigma is not an automorphism: fails on [{alg.tags[i]}, {alg.tags[j]}]")

    k_basis, q_basis, t_basis = [], [], []
    for a in rd.positive_roots:
        ea, fa = bd.e(a), bd.e(tuple(-x for x in a))
        eps_a = QQ_I(e_full[a], 0)
        X = ex.vadd(ea, ex.vscale(eps_a, fa))
        Y = ex.vscale(ex.I, ex.vsub(ea, ex.vscale(eps_a, fa)))
        (k_basis if e_full[a] == -1 else q_basis).extend([X, Y])
    for k in range(rd.rank):
        t_basis.append(ex.vscale(ex.I, bd.h(k)))
    k_basis = t_basis + k_basis

    for name, basis, sign in (("k", k_basis, -1), ("q", q_basis, 1)):
        gram = [[QQ_I(sign, 0) * bd.killing(x, y) for y in basis] for x in basis]
        ok, k = ex.leading_minors_positive(gram) if gram else (True, None)
        if not ok:
            raise InvalidRealForm(
                f"Killing form is not {'negative' if sign < 0 else 'positive'} definite on {name} (minor {k})")

    as_t = lambda M: tuple(tuple(r) for r in M)
    return RealFormData(bd=bd, eps=e_full, sigma_matrix=as_t(S), theta_matrix=as_t(T),
                        sigma_u_matrix=as_t(U), k_basis=tuple(map(tuple, k_basis)),
                        q_basis=tuple(map(tuple, q_basis)), t_basis=tuple(map(tuple, t_basis)))


def real_form_report(rf: RealFormData) -> dict:
    """Exact re-verification of the conjugation identities on every root."""
    bd = rf.bd
    n = bd.dim
    units = [ex.unit(n, i) for i in range(n)]
    out = {"sigma_involutive": all(rf.sigma(rf.sigma(u)) == u for u in units),
           "theta_involutive": all(rf.theta(rf.theta(u)) == u for u in units),
           "commute": all(rf.sigma(rf.theta(u)) == rf.theta(rf.sigma(u)) for u in units)}
    out["sigma_on_roots"] = all(
        rf.sigma(bd.e(a)) == ex.vscale(QQ_I(rf.eps[a], 0), bd.e(tuple(-x for x in a)))
        for a in bd.rd.roots)
    out["k_fixed"] = all(rf.theta(list(x)) == list(x) for x in rf.k_basis)
    out["q_negated"] = all(rf.theta(list(x)) == ex.vscale(QQ_I(-1, 0), list(x)) for x in rf.q_basis)
    out["real"] = all(rf.sigma(list(x)) == list(x) for x in rf.k_basis + rf.q_basis)
    return out


def su_pq(p: int, q: int):
    """Convenience: (BasisData, RealFormData) for su(p, q) with p >= q >= 0.

    The inner real form whose noncompact simple root is alpha_p (or none for
    the compact form q == 0).
    """
    rd = build_root_system(f"A{p + q - 1}")
    bd = build_normalized_basis(rd)
    eps = eps_from_simple(rd, [p] if q else [])
    return bd, apply_real_form(bd, eps)
