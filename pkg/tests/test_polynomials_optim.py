"""Polynomial fields and the sphere optimizer."""
import numpy as np
import sympy as sp
from hypothesis import given, strategies as st

from subkoba.optim import sphere_maximize
from subkoba.polynomials import PolyField, gens, parse_word, word_field, word_json, word_str

cplx = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def test_bracket_heisenberg():
    z = gens(3)
    X1 = PolyField.from_exprs([1, 0, 0], 3)
    X2 = PolyField.from_exprs([0, 1, z[0]], 3)
    br = X1.bracket(X2)
    assert [p.as_expr() for p in br.comps] == [0, 0, 1]
    assert X1.bracket(X1).is_zero()


@given(st.lists(cplx, min_size=2, max_size=2))
def test_compiled_matches_sympy(p):
    z = gens(2)
    exprs = [z[0] ** 2 * z[1] - 3 * sp.I * z[1] + sp.Rational(1, 2), z[0] ** 3]
    X = PolyField.from_exprs(exprs, 2)
    num = X(p)
    ref = [complex(e.subs({z[0]: p[0], z[1]: p[1]})) for e in exprs]
    assert np.allclose(num, ref)


def test_field_round_trip_and_words():
    z = gens(2)
    X = PolyField.from_exprs([z[0] * z[1] + sp.I, 0], 2)
    Y = PolyField.from_dict(X.to_dict(), 2)
    assert [p.as_expr() for p in Y.comps] == [p.as_expr() for p in X.comps]
    w = (1, (1, 2))
    assert parse_word(word_json(w)) == w and word_str(w) == "[X1,[X1,X2]]"
    frame = [PolyField.from_exprs([1, 0], 2), PolyField.from_exprs([0, z[0]], 2)]
    assert [p.as_expr() for p in word_field(frame, (1, 2)).comps] == [0, 1]


def test_sphere_maximize_rayleigh():
    """Max of x^T A x on the sphere is the top eigenvalue."""
    rng = np.random.default_rng(0)
    M = rng.standard_normal((6, 6))
    A = M + M.T
    res = sphere_maximize(lambda x: float(x @ A @ x), lambda x: 2 * A @ x, 6, restarts=8)
    assert abs(res.best.value - np.linalg.eigvalsh(A)[-1]) < 1e-8


def test_sphere_maximize_deterministic_across_threads():
    A = np.diag([1.0, 2.0, 3.0])
    f, g = (lambda x: float(x @ A @ x)), (lambda x: 2 * A @ x)
    a = sphere_maximize(f, g, 3, restarts=6, threads=1)
    b = sphere_maximize(f, g, 3, restarts=6, threads=4)
    assert np.array_equal(a.values, b.values) and np.array_equal(a.best.x, b.best.x)
