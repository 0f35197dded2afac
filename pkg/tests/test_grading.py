"""Gradings by elements of the Cartan subalgebra and the superhorizontal part."""
import itertools

import pytest
from hypothesis import given, strategies as st

from subkoba import exact as ex
from subkoba.errors import DomainError, InvalidGradingElement
from subkoba.grading import (check_bracket_generating, flag_domain, grade, grading_element,
                             invariant_generating_subspaces, level_additivity_violations, parity_violations,
                             root_level, validate_graded_brackets)
from subkoba.lie_core import build_normalized_basis, build_root_system


def brute_dims(t, v):
    """Level dims by summing simple-root coefficients outside v (oracle)."""
    rd = build_root_system(t)
    vs = set(v or [])
    levels = [sum(c for k, c in enumerate(a) if k + 1 not in vs) for a in rd.roots]
    depth = max(levels)
    dims = [levels.count(l) + (rd.rank if l == 0 else 0) for l in range(-depth, depth + 1)]
    return tuple(dims), depth


CASES = [("A1", None), ("A2", None), ("A2", [1]), ("A3", None), ("A3", [2]), ("A3", [1, 3]),
         ("C2", None), ("B2", [1]), ("B3", None)]


@pytest.mark.parametrize("t,v", CASES)
def test_level_dims_match_oracle(t, v):
    gd = flag_domain(t, v)
    dims, depth = brute_dims(t, v)
    assert gd.dims_tuple() == dims
    assert gd.depth == depth
    assert not level_additivity_violations(gd)
    assert not parity_violations(gd)


def test_su21_torus():
    gd = flag_domain("A2")
    assert gd.dims_tuple() == (1, 2, 2, 2, 1)
    assert gd.depth == 2
    rep = check_bracket_generating(gd.spaces[-1], gd)
    assert rep.generating and rep.depth == 2


def test_su11_depth_one():
    gd = flag_domain("A1")
    assert gd.depth == 1 and gd.dims_tuple() == (1, 1, 1)


@pytest.mark.parametrize("t,v", CASES)
def test_superhorizontal_generates_in_depth_steps(t, v):
    gd = flag_domain(t, v)
    rep = check_bracket_generating(gd.spaces[-1], gd)
    assert rep.generating and rep.depth == gd.depth


@pytest.mark.parametrize("t,v", CASES)
def test_graded_brackets_additive(t, v):
    rep = validate_graded_brackets(flag_domain(t, v))
    assert rep["ok"] and rep["additive"]


def test_single_root_not_generating():
    gd = flag_domain("A2")
    bd = gd.bd
    rep = check_bracket_generating([bd.e((-1, 0))], gd)
    assert not rep.generating


def test_subspace_outside_negative_part():
    gd = flag_domain("A2")
    with pytest.raises(DomainError):
        check_bracket_generating([gd.bd.e((1, 0))], gd)


def test_uniqueness_of_superhorizontal():
    for t in ("A2", "A3"):
        gd = flag_domain(t)
        found = invariant_generating_subspaces(gd)
        sh = tuple(a for a in gd.bd.rd.roots if gd.levels[a] == -1)
        assert [set(c) for c in found] == [set(sh)]


def test_grading_element_values():
    rd = build_root_system("A3")
    bd = build_normalized_basis(rd)
    simple = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert [root_level(bd, grading_element(rd), a) for a in simple] == [1, 1, 1]
    assert [root_level(bd, grading_element(rd, [2]), a) for a in simple] == [1, 0, 1]
    # coroot coordinates: inverse Cartan matrix row sums
    assert grading_element(rd) == (ex.qq("3/2"), ex.qq(2), ex.qq("3/2"))


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_root_level_is_linear(T):
    bd = build_normalized_basis(build_root_system("A2"))
    T = tuple(ex.qq(t) for t in T)
    for a, b in itertools.product(bd.rd.roots, repeat=2):
        s = tuple(x + y for x, y in zip(a, b))
        if s in bd.root_index:
            assert root_level(bd, T, s) == root_level(bd, T, a) + root_level(bd, T, b)


def test_non_integral_element_rejected():
    bd = build_normalized_basis(build_root_system("A2"))
    with pytest.raises(InvalidGradingElement):
        grade(bd, (ex.qq("1/2"), ex.qq(1)))
