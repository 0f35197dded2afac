"""Exact scalars and small linear algebra over Q and Q(i).

Vectors are plain Python lists of Gaussian rationals (``QQ_I`` elements).
Subspaces are lists of such vectors; most helpers return a reduced
(row-echelon) spanning set so that results are canonical.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)
I = QQ_I(0, 1)


def qq(x) -> "QQ.dtype":
    """Coerce int / Fraction / mpq / 'p/q' string to a rational."""
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, float):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    return QQ(x)


def gauss(x, y=None) -> "QQ_I.dtype":
    """Coerce to a Gaussian rational. Accepts ``(re, im)`` pairs and complex."""
    if y is not None:
        return QQ_I(qq(x), qq(y))
    if isinstance(x, type(ZERO)):
        return x
    if isinstance(x, complex):
        return QQ_I(qq(x.real), qq(x.imag))
    if isinstance(x, (tuple, list)):
        return QQ_I(qq(x[0]), qq(x[1]))
    return QQ_I(qq(x), 0)


def conj(z):
    return QQ_I(z.x, -z.y)


def is_zero(z) -> bool:
    return not z


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def to_complex(z) -> complex:
    return complex(float(z.x), float(z.y))


def real_part(z):
    """Real part of a Gaussian rational, raising if it is not real."""
    if z.y:
        raise ValueError(f"expected a real value, got {z}")
    return z.x


def fmt_rational(q) -> str:
    q = qq(q)
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"{int(q.numerator)}/{int(q.denominator)}"


def parse_rational(s: str):
    s = s.strip()
    if "/" in s:
        p, d = s.split("/")
        return QQ(int(p), int(d))
    if "." in s or "e" in s.lower():
        f = Fraction(s)
        return QQ(f.numerator, f.denominator)
    return QQ(int(s))


def fmt_gauss(z) -> list[str]:
    return [fmt_rational(z.x), fmt_rational(z.y)]


def parse_gauss(pair) -> "QQ_I.dtype":
    if isinstance(pair, str):
        return QQ_I(parse_rational(pair), 0)
    return QQ_I(parse_rational(str(pair[0])), parse_rational(str(pair[1])))


def rationalize(x: complex, max_den: int = 10**6):
    """Nearest Gaussian rational with bounded denominators."""
    re = Fraction(x.real).limit_denominator(max_den)
    im = Fraction(x.imag).limit_denominator(max_den)
    return QQ_I(qq(re), qq(im))


# -- vectors -----------------------------------------------------------------

def zeros(n: int) -> list:
    return [ZERO] * n


def unit(n: int, i: int) -> list:
    v = [ZERO] * n
    v[i] = ONE
    return v


def vadd(u, v):
    return [a + b for a, b in zip(u, v)]


def vsub(u, v):
    return [a - b for a, b in zip(u, v)]


def vscale(c, v):
    return [c * a for a in v]


def vconj(v):
    return [conj(a) for a in v]


def is_zero_vec(v) -> bool:
    return not any(v)


def lincomb(coeffs, vectors, n: int):
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                if a:
                    out[i] += c * a
    return out


def hermitian_dot(u, v):
    """Standard sesquilinear product sum(conj(u_i) v_i)."""
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += conj(a) * b
    return s


# -- subspaces ---------------------------------------------------------------

def _dm(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    return DomainMatrix([list(r) for r in rows], (len(rows), ncols), QQ_I)


def rank(vectors: Sequence[Sequence], n: int | None = None) -> int:
    if not vectors:
        return 0
    n = len(vectors[0]) if n is None else n
    return _dm(vectors, n).rank()


def span(vectors: Sequence[Sequence], n: int | None = None) -> list[list]:
    """Reduced row-echelon basis of the span."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    n = len(vectors[0]) if n is None else n
    rref, pivots = _dm(vectors, n).rref()
    rows = rref.to_list()
    return [list(rows[i]) for i in range(len(pivots))]


def contains(basis: Sequence[Sequence], v: Sequence) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == rank(basis)


def is_subspace(sub: Sequence[Sequence], big: Sequence[Sequence]) -> bool:
    if not sub:
        return True
    return rank(list(big) + list(sub)) == rank(big)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of {x : M x = 0} for the matrix with the given rows."""
    if not rows:
        return [unit(ncols, i) for i in range(ncols)]
    return [list(r) for r in _dm(rows, ncols).nullspace().to_list()]


def solve(columns: Sequence[Sequence], target: Sequence):
    """Coefficients c with sum c_i columns_i == target, or None."""
    n = len(target)
    k = len(columns)
    if k == 0:
        return [] if not any(target) else None
    rows = [[columns[j][i] for j in range(k)] + [-target[i]] for i in range(n)]
    for v in nullspace(rows, k + 1):
        if v[k]:
            inv = ONE / v[k]
            return [c * inv for c in v[:k]]
    return None


def intersection(U: Sequence[Sequence], W: Sequence[Sequence]) -> list[list]:
    if not U or not W:
        return []
    n = len(U[0])
    p = len(U)
    rows = [[u[i] for u in U] + [-w[i] for w in W] for i in range(n)]
    vecs = [lincomb(x[:p], U, n) for x in nullspace(rows, p + len(W))]
    return span(vecs, n)


def complement(big: Sequence[Sequence], small: Sequence[Sequence]) -> list[list]:
    """Hermitian-orthogonal complement of ``small`` inside ``big``."""
    if not small:
        return span(big)
    if not big:
        return []
    n = len(big[0])
    p = len(big)
    # x = sum a_i big_i with <s, x> = 0 for each s in small
    rows = [[hermitian_dot(s, b) for b in big] for s in small]
    vecs = [lincomb(a, big, n) for a in nullspace(rows, p)]
    return span(vecs, n)


def sum_spaces(*spaces: Sequence[Sequence]) -> list[list]:
    allv = [list(v) for s in spaces for v in s]
    return span(allv) if allv else []


# -- matrices ----------------------------------------------------------------

def leading_minors_positive(gram: Sequence[Sequence]) -> tuple[bool, int | None]:
    """Sylvester test for a Hermitian matrix over Q(i).

    Returns ``(True, None)`` when positive definite, else ``(False, k)`` with
    ``k`` the size of the first non-positive leading minor.
    """
    n = len(gram)
    for k in range(1, n + 1):
        sub = DomainMatrix([list(r[:k]) for r in gram[:k]], (k, k), QQ_I)
        det = sub.det()
        if det.y or det.x <= 0:
            return False, k
    return True, None


def matvec(M: Sequence[Sequence], v: Sequence):
    out = []
    for row in M:
        s = ZERO
        for a, b in zip(row, v):
            if a and b:
                s += a * b
        out.append(s)
    return out


def as_gauss_vector(values: Iterable) -> list:
    return [gauss(x) for x in values]
