"""Root systems, normalized bases and real forms against independent oracles."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subkoba import exact as ex
from subkoba.errors import InvalidRealForm, UnsupportedType
from subkoba.lie_core import (LieAlgebra, apply_real_form, build_normalized_basis, build_root_system,
                              eps_from_simple, normalization_report, real_form_report, su_pq)

TYPES = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4"]


def weyl_orbit_roots(C):
    """All roots as simple-root coordinates, by reflecting simple roots (oracle)."""
    r = len(C)
    simple = [tuple(int(i == k) for i in range(r)) for k in range(r)]
    seen, todo = set(simple), list(simple)
    while todo:
        a = todo.pop()
        for i in range(r):
            # <a, alpha_i^vee> = sum_j a_j C[i][j] with C[i][j] = <alpha_j, alpha_i^vee>
            pairing = sum(a[j] * C[i][j] for j in range(r))
            b = tuple(a[k] - (pairing if k == i else 0) for k in range(r))
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def expected_count(t):
    fam, r = t[0], int(t[1:])
    return {"A": r * (r + 1), "B": 2 * r * r, "C": 2 * r * r, "D": 2 * r * (r - 1)}[fam]


@pytest.mark.parametrize("t", TYPES)
def test_roots_match_weyl_orbit(t):
    rd = build_root_system(t)
    assert set(rd.roots) == weyl_orbit_roots(rd.cartan_matrix)
    assert len(rd.roots) == expected_count(t)
    assert len(rd.positive_roots) * 2 == len(rd.roots)
    assert all(all(c >= 0 for c in a) for a in rd.positive_roots)


def trace_form_factor(family, N):
    return {"A": 2 * N, "B": N - 2, "D": N - 2, "C": N + 2}[family]


@pytest.mark.parametrize("t", ["A1", "A2", "A3", "B2", "C2", "C3", "D4"])
def test_killing_matches_trace_form(t):
    """B(x, y) = kappa tr(xy) on the defining matrices of the rescaled basis."""
    rd = build_root_system(t)
    bd = build_normalized_basis(rd)
    mats = [np.array(m, dtype=float) for m in bd.matrices]
    N = mats[0].shape[0]
    kappa = trace_form_factor(rd.family, N)
    # recover each basis scale from B(e_a, e_-a) = b_a
    K = np.array([[float(ex.real_part(c)) for c in row] for row in bd.killing_matrix])
    T = np.array([[np.trace(a @ b) for b in mats] for a in mats]) * kappa
    scale = np.ones(len(mats))
    for a in rd.positive_roots:
        i, j = bd.root_index[a], bd.root_index[tuple(-x for x in a)]
        s = np.sqrt(K[i, j] / T[i, j])
        scale[i] = scale[j] = s
    assert np.allclose(np.outer(scale, scale) * T, K, atol=1e-12)


@pytest.mark.parametrize("t", ["A1", "A2", "A3", "C2", "B2"])
def test_normalization_exact(t):
    bd = build_normalized_basis(build_root_system(t))
    rep = normalization_report(bd)
    for key, val in rep.items():
        if key == "cyclic":
            assert not val["failed"] and val["checked"] > 0 or t == "A1"
        else:
            assert val == [], key
    assert all(b > 0 for b in bd.b.values())


def test_a1_normalization_values():
    bd = build_normalized_basis(build_root_system("A1"))
    h = bd.h(0)
    assert bd.killing(h, h) == ex.gauss(8)
    assert bd.h_alpha[(1,)] == (Fraction(1, 4),)
    assert bd.b[(1,)] == 1


def test_unknown_type():
    with pytest.raises(UnsupportedType):
        build_root_system("Q3")
    with pytest.raises(UnsupportedType):
        build_root_system("G2")


vec = st.lists(st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4)), min_size=8, max_size=8)


@given(vec, vec, vec)
def test_a2_jacobi_and_invariance(x, y, z):
    bd = build_normalized_basis(build_root_system("A2"))
    x, y, z = ([ex.gauss(c) for c in v] for v in (x, y, z))
    br = bd.bracket
    jac = ex.vadd(ex.vadd(br(x, br(y, z)), br(y, br(z, x))), br(z, br(x, y)))
    assert not any(jac)
    assert br(x, y) == ex.vscale(ex.gauss(-1), br(y, x))
    assert bd.killing(br(x, y), z) == bd.killing(x, br(y, z))


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_su_pq_real_forms(p, q):
    bd, rf = su_pq(p, q)
    rep = real_form_report(rf)
    assert all(rep.values()), rep
    # B < 0 on k and B > 0 on q
    gk = [[-bd.killing(list(a), list(b)) for b in rf.k_basis] for a in rf.k_basis]
    gq = [[bd.killing(list(a), list(b)) for b in rf.q_basis] for a in rf.q_basis]
    assert ex.leading_minors_positive(gk)[0]
    assert ex.leading_minors_positive(gq)[0]
    assert len(rf.q_basis) == 2 * p * q
    assert len(rf.k_basis) == p * p + q * q - 1


def test_compact_form_definite():
    bd, rf = su_pq(2, 0)
    assert not rf.q_basis
    g = [[-bd.killing(list(a), list(b)) for b in rf.k_basis] for a in rf.k_basis]
    assert ex.leading_minors_positive(g)[0]


def test_inconsistent_labels_rejected():
    rd = build_root_system("A2")
    bd = build_normalized_basis(rd)
    with pytest.raises(InvalidRealForm):
        apply_real_form(bd, {a: 1 for a in rd.positive_roots})
    with pytest.raises(InvalidRealForm):
        apply_real_form(bd, {(1, 0): 2, (0, 1): 1, (1, 1): 1})


def test_eps_from_simple_parity():
    rd = build_root_system("A2")
    eps = eps_from_simple(rd, [1])
    assert eps[(1, 0)] == 1 and eps[(0, 1)] == -1 and eps[(1, 1)] == 1


def test_algebra_round_trip():
    bd = build_normalized_basis(build_root_system("B2"))
    la = LieAlgebra.from_dict(bd.algebra.to_dict())
    assert la.table == bd.algebra.table
