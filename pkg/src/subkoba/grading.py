"""Gradings by a Cartan element, superhorizontal subspace, bracket generation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import exact as ex
from .errors import DomainError, InvalidGradingElement
from .exact import QQ, QQ_I
from .lie_core import (BasisData, RealFormData, RootDatum, apply_real_form,
                       build_normalized_basis, build_root_system)


def _simple_indices(rd: RootDatum, v_simple_roots) -> set[int]:
    """0-based indices; accepts 1-based ints, root tuples, 'torus' or None."""
    if v_simple_roots in (None, "torus", "t", ()):
        return set()
    out = set()
    for s in v_simple_roots:
        if isinstance(s, (tuple, list)):
            s = tuple(s)
            if s not in rd.simple_roots:
                raise InvalidGradingElement(f"{s} is not a simple root")
            out.add(rd.simple_roots.index(s))
        else:
            i = int(s)
            if not 1 <= i <= rd.rank:
                raise InvalidGradingElement(f"simple root index {i} out of range 1..{rd.rank}")
            out.add(i - 1)
    return out


def grading_element(rd: RootDatum, v_simple_roots=None) -> tuple:
    """T = sum of the dual generators T^i over simple roots not in v.

    Returned in simple-coroot coordinates: T = sum t_k H_k.
    """
    v = _simple_indices(rd, v_simple_roots)
    r = rd.rank
    target = [QQ_I(0 if j in v else 1, 0) for j in range(r)]
    # alpha_j(T) = sum_k t_k a_kj
    cols = [[QQ_I(rd.cartan_matrix[k][j], 0) for j in range(r)] for k in range(r)]
    t = ex.solve(cols, target)
    return tuple(ex.real_part(c) for c in t)


def root_level(bd: BasisData, T, root) -> "QQ.dtype":
    return sum((QQ(c) * t for c, t in zip(bd.alpha_on_cartan[tuple(root)], T)), QQ(0))


@dataclass(frozen=True, eq=False)
class GradedDecomposition:
    bd: BasisData
    T: tuple
    levels: dict               # root -> int
    depth: int
    spaces: dict               # l -> list of basis vectors
    v_roots: tuple
    rf: RealFormData | None = None

    @property
    def dims(self) -> dict:
        return {l: len(self.spaces.get(l, [])) for l in range(-self.depth, self.depth + 1)}

    def dims_tuple(self) -> tuple:
        return tuple(self.dims[l] for l in range(-self.depth, self.depth + 1))

    def bracket(self, x, y):
        return self.bd.bracket(x, y)

    @property
    def dim(self) -> int:
        return self.bd.dim

    def level_of_index(self, i: int) -> int:
        if i in self.bd.cartan_slots:
            return 0
        return self.levels[self.bd.rd.roots[i]]

    def roots_at(self, l: int) -> list:
        return [a for a in self.bd.rd.roots if self.levels[a] == l]

    def negative_part(self) -> list:
        return [v for l in range(-self.depth, 0) for v in self.spaces.get(l, [])]

    def in_level(self, x, l: int) -> bool:
        """Exact membership test of x in g_l (supports are root-aligned)."""
        return all(not c or self.level_of_index(i) == l for i, c in enumerate(x))

    def to_dict(self) -> dict:
        return {
            "cartan_type": self.bd.rd.cartan_type,
            "T": [ex.fmt_rational(t) for t in self.T],
            "levels": {",".join(map(str, a)): l for a, l in self.levels.items()},
            "dims": {str(l): d for l, d in self.dims.items()},
            "depth": self.depth,
            "v_roots": [list(a) for a in self.v_roots],
        }


def grade(bd: BasisData, T, rf: RealFormData | None = None) -> GradedDecomposition:
    T = tuple(ex.qq(t) for t in T)
    levels = {}
    for a in bd.rd.roots:
        lv = root_level(bd, T, a)
        if lv.denominator != 1:
            raise InvalidGradingElement(f"root {a} has non-integral level {ex.fmt_rational(lv)}")
        levels[a] = int(lv.numerator)
    if any(levels[a] == 0 and levels[tuple(-x for x in a)] != 0 for a in levels):
        raise InvalidGradingElement("levels of opposite roots are not opposite")
    depth = max(abs(l) for l in levels.values()) if levels else 0
    spaces: dict = {l: [] for l in range(-depth, depth + 1)}
    for a in bd.rd.roots:
        spaces[levels[a]].append(bd.e(a))
    for k in range(bd.rd.rank):
        spaces[0].append(bd.h(k))
    gd = GradedDecomposition(bd=bd, T=T, levels=levels, depth=depth, spaces=spaces,
                             v_roots=tuple(a for a in bd.rd.roots if levels[a] == 0), rf=rf)
    bad = level_additivity_violations(gd)
    if bad:
        raise InvalidGradingElement(f"graded bracket law fails on {bad[:3]}")
    if rf is not None:
        par = parity_violations(gd)
        if par:
            raise InvalidGradingElement(f"parity fails for roots {par[:3]}")
    return gd


def level_additivity_violations(gd: GradedDecomposition) -> list:
    """Basis pairs where [g_i, g_j] leaves g_{i+j}."""
    bad = []
    for (i, j), terms in gd.bd.algebra.table.items():
        li, lj = gd.level_of_index(i), gd.level_of_index(j)
        for k, _ in terms:
            if gd.level_of_index(k) != li + lj:
                bad.append((i, j))
                break
    return bad


def parity_violations(gd: GradedDecomposition) -> list:
    """Roots whose level parity disagrees with compactness (even in k, odd in q)."""
    rf = gd.rf
    if rf is None:
        return []
    return [a for a in gd.bd.rd.roots if (gd.levels[a] % 2 == 0) != rf.is_compact(a)]


def superhorizontal(gd: GradedDecomposition) -> list:
    return [list(v) for v in gd.spaces.get(-1, [])]


# ---------------------------------------------------------------------------
# bracket generation

@dataclass(frozen=True)
class Generating:
    depth: int
    words: dict  # step -> list of bracket words (strings) spanning the new layer
    generating: bool = True


@dataclass(frozen=True)
class NotGenerating:
    stabilized: list
    steps: int
    words: dict = field(default_factory=dict)
    generating: bool = False


def _span_contains_all(basis, vectors) -> bool:
    return ex.is_subspace(vectors, basis)


def check_bracket_generating(sub: Sequence, gd: GradedDecomposition, tags: Sequence[str] | None = None):
    """Smallest s with sub + [sub,sub] + ... (s-fold) = g^- ."""
    target = gd.negative_part()
    sub = [list(v) for v in sub]
    if not ex.is_subspace(sub, target):
        raise DomainError("subspace is not contained in the negative part")
    if tags is None:
        tags = [f"v{i}" for i in range(len(sub))]
    gens = list(zip(tags, sub))
    layer = list(gens)
    total = ex.span(sub, gd.dim)
    words = {1: [w for w, _ in gens]}
    step = 1
    full = ex.rank(target) if target else 0
    while True:
        if len(total) == full:
            return Generating(depth=step, words=words)
        new_layer = []
        step_words = []
        for (wa, a), (wb, b) in itertools.product(gens, layer):
            c = gd.bracket(a, b)
            if any(c) and not ex.contains(total, c):
                total = ex.span(total + [c], gd.dim)
                w = f"[{wa},{wb}]"
                new_layer.append((w, c))
                step_words.append(w)
        if not new_layer:
            return NotGenerating(stabilized=total, steps=step, words=words)
        step += 1
        words[step] = step_words
        layer = new_layer + [(w, v) for w, v in layer]


def root_tags(roots) -> list[str]:
    return ["e(" + ",".join(map(str, a)) + ")" for a in roots]


# ---------------------------------------------------------------------------
# graded bracket law of the structural lemma

@dataclass
class GradedSpaces:
    """Levels of a (possibly non-root-aligned) filtration-compatible splitting."""

    spaces: Mapping[int, list]
    bracket: Callable
    dim: int

    @property
    def depth(self) -> int:
        return max((abs(l) for l, s in self.spaces.items() if s), default=0)


def _sum_levels(spaces, levels) -> list:
    vecs = [v for l in levels for v in spaces.get(l, [])]
    return ex.span(vecs) if vecs else []


def validate_graded_brackets(gd) -> dict:
    """Check [g_i, g_-l] against the one-step-slack inclusions.

    For 0 <= l <= i: [g_i, g_-l] in g_{<= i-l+1}; for 0 <= i <= l:
    [g_i, g_-l] in g_{>= i-l-1}; [g_i, g_-i] in g_-1 + g_0 + g_1.  The strict
    additive law [g_i, g_j] in g_{i+j} is reported separately.
    """
    spaces = gd.spaces
    k = gd.depth
    lv = [l for l in spaces if spaces[l]]
    lo, hi = min(lv, default=0), max(lv, default=0)
    report = {"violations": [], "additive_violations": [], "checked": 0}
    for i in range(0, k + 1):
        for l in range(0, k + 1):
            A, Bs = spaces.get(i, []), spaces.get(-l, [])
            if not A or not Bs:
                continue
            brs = [gd.bracket(a, b) for a in A for b in Bs]
            brs = [c for c in brs if any(c)]
            report["checked"] += 1
            conds = []
            if i >= l:
                conds.append(("<=", i - l + 1, range(lo, i - l + 2)))
            if i <= l:
                conds.append((">=", i - l - 1, range(i - l - 1, hi + 1)))
            if i == l:
                conds.append(("-1..1", 0, range(-1, 2)))
            for kind, bound, rng in conds:
                space = _sum_levels(spaces, rng)
                if not ex.is_subspace(brs, space):
                    report["violations"].append({"i": i, "l": l, "law": kind, "bound": bound})
            if not ex.is_subspace(brs, _sum_levels(spaces, [i - l])):
                report["additive_violations"].append((i, -l))
    report["ok"] = not report["violations"]
    report["additive"] = not report["additive_violations"]
    return report


# ---------------------------------------------------------------------------
# flag-domain fixtures and uniqueness

def flag_domain_eps(gd: GradedDecomposition) -> dict:
    """Labeling of the canonical flag domain: noncompact iff odd level."""
    return {a: (1 if gd.levels[a] % 2 else -1) for a in gd.bd.rd.positive_roots}


def flag_domain(cartan_type: str, v_simple_roots=None):
    """(BasisData, GradedDecomposition with real form) of a canonical flag domain."""
    rd = build_root_system(cartan_type)
    bd = build_normalized_basis(rd)
    T = grading_element(rd, v_simple_roots)
    gd0 = grade(bd, T)
    rf = apply_real_form(bd, flag_domain_eps(gd0))
    return grade(bd, T, rf)


def invariant_generating_subspaces(gd: GradedDecomposition) -> list:
    """All v-invariant sums of noncompact negative root spaces with dim g_-1
    that bracket-generate g^-.  The superhorizontal one is expected to be unique.
    """
    rf = gd.rf
    if rf is None:
        raise DomainError("a real form is required")
    bd = gd.bd
    cand = [a for a in bd.rd.roots if gd.levels[a] < 0 and not rf.is_compact(a)]
    m = len(gd.spaces.get(-1, []))
    v_basis = gd.spaces[0]
    out = []
    for combo in itertools.combinations(cand, m):
        S = [bd.e(a) for a in combo]
        if any(not ex.is_subspace([bd.bracket(x, s)], S) for x in v_basis for s in S):
            continue
        rep = check_bracket_generating(S, gd)
        if rep.generating:
            out.append(combo)
    return out
