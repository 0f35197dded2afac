"""Polynomial holomorphic vector fields on C^n.

Exact algebra (brackets, minors) runs on sympy ``Poly`` over Q(i); numeric
evaluation uses a compiled monomial table in plain complex arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import sympy as sp
from sympy.polys.domains import QQ_I

from . import exact as ex


def gens(n: int) -> tuple:
    return sp.symbols(f"z1:{n + 1}")


def _poly(expr, g) -> sp.Poly:
    return sp.Poly(expr, *g, domain=QQ_I)


class CompiledPoly:
    """Fast numeric evaluation of one polynomial."""

    __slots__ = ("terms", "const")

    def __init__(self, p: sp.Poly):
        self.terms = []
        self.const = 0j
        for monom, c in sorted(p.rep.to_dict().items()):
            cc = complex(float(c.x), float(c.y))
            pw = tuple((k, e) for k, e in enumerate(monom) if e)
            if pw:
                self.terms.append((cc, pw))
            else:
                self.const += cc

    def __call__(self, z) -> complex:
        s = self.const
        for c, pw in self.terms:
            t = c
            for k, e in pw:
                t *= z[k] ** e if e > 1 else z[k]
            s += t
        return s


@dataclass(frozen=True, eq=False)
class PolyField:
    """sum_k comps[k] d/dz_k with polynomial coefficients."""

    comps: tuple

    @classmethod
    def from_exprs(cls, exprs: Sequence, n: int) -> "PolyField":
        g = gens(n)
        return cls(tuple(_poly(e, g) for e in exprs))

    @property
    def n(self) -> int:
        return len(self.comps)

    @property
    def gens(self):
        return self.comps[0].gens

    def compiled(self) -> tuple:
        c = getattr(self, "_compiled", None)
        if c is None:
            c = tuple(CompiledPoly(p) for p in self.comps)
            object.__setattr__(self, "_compiled", c)
        return c

    def __call__(self, z) -> list:
        return [f(z) for f in self.compiled()]

    def bracket(self, other: "PolyField") -> "PolyField":
        g = self.gens
        out = []
        for i in range(self.n):
            acc = _poly(0, g)
            for k in range(self.n):
                if not self.comps[k].is_zero:
                    acc += self.comps[k] * other.comps[i].diff(g[k])
                if not other.comps[k].is_zero:
                    acc -= other.comps[k] * self.comps[i].diff(g[k])
            out.append(acc)
        return PolyField(tuple(out))

    def scale(self, c) -> "PolyField":
        g = self.gens
        return PolyField(tuple(p * _poly(c, g) for p in self.comps))

    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.comps)

    def degree(self) -> int:
        return max((p.total_degree() for p in self.comps if not p.is_zero), default=0)

    def to_dict(self) -> list:
        """Components as lists of [exponents, [re, im]] terms."""
        return [[[list(m), ex.fmt_gauss(c)] for m, c in sorted(p.rep.to_dict().items())]
                for p in self.comps]

    @classmethod
    def from_dict(cls, data, n: int) -> "PolyField":
        g = gens(n)
        comps = []
        for comp in data:
            terms = {tuple(int(e) for e in m): ex.parse_gauss(c) for m, c in comp}
            comps.append(sp.Poly.from_dict(terms, *g, domain=QQ_I) if terms else _poly(0, g))
        return cls(tuple(comps))

    def __repr__(self) -> str:
        g = self.gens
        parts = [f"({p.as_expr()})*d/d{g[k]}" for k, p in enumerate(self.comps) if not p.is_zero]
        return " + ".join(parts) or "0"


def word_field(frame: Sequence[PolyField], word) -> PolyField:
    """Field of a bracket word: int (1-based) or nested pair (u, v)."""
    if isinstance(word, int):
        return frame[word - 1]
    a, b = word
    return word_field(frame, a).bracket(word_field(frame, b))


def word_str(word) -> str:
    if isinstance(word, int):
        return f"X{word}"
    return f"[{word_str(word[0])},{word_str(word[1])}]"


def parse_word(obj):
    """Inverse of the JSON encoding: ints stay, lists become pairs."""
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        s = obj.strip()
        if s.startswith("X"):
            return int(s[1:])
        raise ValueError(f"cannot parse word {obj!r}")
    a, b = obj
    return (parse_word(a), parse_word(b))


def word_json(word):
    return word if isinstance(word, int) else [word_json(word[0]), word_json(word[1])]


def numeric_matrix(fields: Sequence[PolyField], z) -> np.ndarray:
    """n x m matrix whose columns are the fields evaluated at z."""
    return np.array([f(z) for f in fields], dtype=complex).T
