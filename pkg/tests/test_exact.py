from fractions import Fraction

from hypothesis import given, strategies as st

from subkoba import exact as ex

fr = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))


def test_rational_round_trip():
    for s in ["0", "1", "-3/4", "22/7"]:
        assert ex.fmt_rational(ex.parse_rational(s)) == s
    assert ex.parse_gauss(["1/2", "-3"]) == ex.gauss(Fraction(1, 2), -3)


@given(st.lists(st.tuples(fr, fr), min_size=1, max_size=6))
def test_gauss_pair_round_trip(pairs):
    for a, b in pairs:
        z = ex.gauss(a, b)
        assert ex.parse_gauss(ex.fmt_gauss(z)) == z


def test_rationalize_recovers_simple_values():
    assert ex.rationalize(0.5 - 0.25j) == ex.gauss(Fraction(1, 2), Fraction(-1, 4))


@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_nullspace_solves(rows, cols, data):
    M = [[ex.gauss(data.draw(fr)) for _ in range(cols)] for _ in range(rows)]
    for v in ex.nullspace(M, cols):
        assert not any(sum((a * b for a, b in zip(r, v)), ex.ZERO) for r in M)
    assert ex.rank(M, cols) + len(ex.nullspace(M, cols)) == cols


def test_intersection_and_complement():
    e = lambda i: ex.unit(3, i)
    U = [e(0), e(1)]
    W = [e(1), e(2)]
    I = ex.intersection(U, W)
    assert len(I) == 1 and ex.contains(I, e(1))
    C = ex.complement(ex.sum_spaces(U, W), U)
    assert len(C) == 1 and ex.rank(U + C, 3) == 3


def test_sylvester():
    assert ex.leading_minors_positive([[ex.gauss(2), ex.gauss(1)], [ex.gauss(1), ex.gauss(2)]]) == (True, None)
    assert ex.leading_minors_positive([[ex.gauss(1), ex.gauss(2)], [ex.gauss(2), ex.gauss(1)]]) == (False, 2)
