"""Classification checks for homogeneous pairs and the chart conditions."""
import numpy as np
import pytest

from subkoba import exact as ex
from subkoba.errors import InvalidIdeal
from subkoba.flows import engel_chart, heisenberg_chart, shifted_minor_chart, vanishing_minor_chart
from subkoba.grading import flag_domain, validate_graded_brackets
from subkoba.hyperbolicity import (affine_line_algebra, check_forstneric_assumption, check_no_complex_line,
                                   classify_homogeneous, compact_part, complex_part, compute_CN, flag_datum,
                                   heisenberg_algebra, heisenberg_line_datum, k1_datum, largest_ideal_in,
                                   nonintegrable_datum, section5_grading, sl2c_real_datum, su2_datum,
                                   validate_abelian_ideal_lemmas, validate_j_axioms)
from subkoba.lie_core import build_normalized_basis, build_root_system

# canonical flag data from su(p, q) with p + q <= 4
CANONICAL = [("A1", None), ("A2", None), ("A2", [1]), ("A3", None), ("A3", [2]), ("A3", [1, 2]),
             ("A3", [1, 3])]


@pytest.fixture(scope="module", params=CANONICAL, ids=lambda c: f"{c[0]}-{c[1]}")
def canonical(request):
    return flag_datum(flag_domain(*request.param))


def test_j_axioms_pass(canonical):
    rep = validate_j_axioms(canonical)
    assert rep["ok"], rep["failed"]


def test_canonical_accepted(canonical):
    v = classify_homogeneous(canonical)
    assert v.accepted, (v.reason, v.checks)
    assert v.checks["theta_invariant"] and v.checks["parity"]


def test_section5_grading_matches_root_grading(canonical):
    gs = section5_grading(canonical)
    assert validate_graded_brackets(gs)["ok"]
    levels = canonical.labels["levels"]
    for l, space in gs.spaces.items():
        n_roots = sum(1 for a, lv in levels.items() if lv == l)
        assert len(space) == (n_roots if l else n_roots + sum(1 for t in canonical.la.tags if t.startswith("ih")))


def test_j_is_complex_structure(canonical):
    for x in canonical.m:
        assert canonical.J(canonical.J(list(x))) == ex.vscale(ex.gauss(-1), list(x))
    for x in canonical.v:
        assert not any(canonical.J(list(x)))


def test_no_complex_line_su21():
    rep = check_no_complex_line(flag_datum(flag_domain("A2")), {"restarts": 8})
    assert rep["pass"] and rep["min"] > 0.1


def test_complex_line_witness():
    hd = heisenberg_line_datum()
    rep = check_no_complex_line(hd, {"restarts": 4})
    assert not rep["pass"]
    x = np.array(rep["witness"])
    C = np.real(hd.la.dense_tensor())
    J = np.array([[float(c.x) for c in r] for r in hd.j])
    assert np.linalg.norm(np.einsum("i,j,ijk->k", x, J @ x, C)) < 1e-8


def test_complex_line_degenerate():
    from dataclasses import replace
    hd = replace(heisenberg_line_datum(), g1R=())
    rep = check_no_complex_line(hd)
    assert rep["pass"] and rep["degenerate"]


def test_compact_factor_rejected():
    hd = su2_datum()
    v = classify_homogeneous(hd)
    assert v.status == "Rejected" and v.reason == "compact factor"
    w = v.witness
    # the witness commutes with q and lies in k
    assert ex.contains(hd.k_basis(), w)
    assert all(not any(hd.bracket(w, list(q))) for q in hd.q_basis())


def test_complex_algebra_rejected():
    hd = sl2c_real_datum()
    v = classify_homogeneous(hd)
    assert v.reason == "complex Lie algebra"
    w = v.witness
    n = hd.dim
    for i in range(n):
        e = ex.unit(n, i)
        assert hd.bracket(hd.J(w), e) == hd.J(hd.bracket(w, e))
    assert len(complex_part(hd)) == n


def test_k1_rejected():
    hd = k1_datum()
    v = classify_homogeneous(hd)
    assert v.reason.startswith("k1")
    assert v.witness_text == "(1)*X(1,1)"
    assert hd.Theta(v.witness) == v.witness
    assert ex.contains([list(x) for x in hd.g1R], v.witness)


def test_nonintegrable_flagged():
    rep = validate_j_axioms(nonintegrable_datum())
    assert not rep["integrable"] and "integrable" in rep["failed"]
    v = classify_homogeneous(nonintegrable_datum())
    assert v.status == "Rejected" and v.witness is not None


def test_every_rejection_has_witness():
    for hd in (su2_datum(), sl2c_real_datum(), k1_datum(), nonintegrable_datum(), heisenberg_line_datum()):
        v = classify_homogeneous(hd)
        assert v.status == "Rejected" and v.witness is not None, hd.name


def test_no_ideal_in_v_for_canonical():
    hd = flag_datum(flag_domain("A3", [2]))
    assert largest_ideal_in(hd, hd.v) == []
    # the whole algebra is an ideal of itself
    assert len(largest_ideal_in(hd, [ex.unit(hd.dim, i) for i in range(hd.dim)])) == hd.dim


def test_compact_part_zero_for_noncompact():
    assert compact_part(flag_datum(flag_domain("A2"))) == []


def test_abelian_ideal_heisenberg():
    la = heisenberg_algebra()
    e = lambda i: ex.unit(3, i)
    rep = validate_abelian_ideal_lemmas(la, [e(0), e(2)])
    assert rep["ok"] and rep["dims"] == {"gg_cap_r": 1, "r_g": 1}
    assert ex.contains(rep["r_g"], e(2))


def test_abelian_ideal_affine_line():
    rep = validate_abelian_ideal_lemmas(affine_line_algebra(), [ex.unit(2, 1)])
    assert rep["ok"] and rep["dims"] == {"gg_cap_r": 1, "r_g": 1}


def test_abelian_ideal_trivial():
    bd = build_normalized_basis(build_root_system("A2"))
    assert validate_abelian_ideal_lemmas(bd.algebra, [])["ok"]


def test_invalid_ideals():
    la = heisenberg_algebra()
    with pytest.raises(InvalidIdeal):
        validate_abelian_ideal_lemmas(la, [ex.unit(3, 0)])
    with pytest.raises(InvalidIdeal):
        validate_abelian_ideal_lemmas(la, [ex.unit(3, i) for i in range(3)])


def test_r_meets_v_detected():
    la = heisenberg_algebra()
    rep = validate_abelian_ideal_lemmas(la, [ex.unit(3, 2)], v=[ex.unit(3, 2)])
    assert not rep["r_cap_v_zero"] and not rep["ok"]


def test_forstneric_proven():
    for cd in (heisenberg_chart(), engel_chart()):
        rep = check_forstneric_assumption(cd)
        assert rep["verdict"] == "proven" and rep["determinant"] == "1"


def test_forstneric_zero_found():
    rep = check_forstneric_assumption(vanishing_minor_chart())
    assert rep["verdict"] == "fail" and rep["zero"] == [[0.0, 0.0]]


def test_forstneric_sampled_is_labelled():
    rep = check_forstneric_assumption(shifted_minor_chart())
    assert rep["verdict"] == "sampled" and "not a proof" in rep["note"]


def test_CN_heisenberg():
    r1 = compute_CN(heisenberg_chart(), 1)
    assert abs(r1["sup"] - 2) < 1e-12
    assert abs(r1["formula"] - 18) < 1e-9 and abs(r1["C_N"] - 18.18) < 1e-9
    r0 = compute_CN(heisenberg_chart(), 0)
    assert abs(r0["formula"] - (1 + 2 * 1)) < 1e-9


def test_CN_vanishing_entries():
    from subkoba.flows import disc_chart
    r = compute_CN(disc_chart(), 2)
    assert r["sup"] == 0 and r["formula"] == 4
