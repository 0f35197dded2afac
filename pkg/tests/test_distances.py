"""Kobayashi and Carnot-Caratheodory estimates on charts."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subkoba.curvature import certify_negative_bound
from subkoba.distances import (Unreachable, cc_distance_upper,
                               horizontal_disc_from_free_part, horizontality_residual, infinitesimal_metric_upper,
                               kobayashi_upper, poincare_distance, poincare_metric, radial_rest, replay_path,
                               schwarz_lower_bound)
from subkoba.errors import DiscEscape, DomainError, InvalidCertificate
from subkoba.flows import disc_chart, heisenberg_chart, heisenberg_subframe
from subkoba.grading import flag_domain

disc_pt = st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False)


def test_poincare_closed_form():
    assert abs(poincare_distance(0, 0.5) - math.log(3)) < 1e-15
    with pytest.raises(DomainError):
        poincare_distance(0, 1.0)


@given(disc_pt, disc_pt, disc_pt)
def test_poincare_metric_axioms(a, b, c):
    dab = poincare_distance(a, b)
    assert abs(dab - poincare_distance(b, a)) < 1e-9
    assert dab <= poincare_distance(a, c) + poincare_distance(c, b) + 1e-9


@given(disc_pt, disc_pt, st.floats(0, 2 * math.pi))
def test_poincare_rotation_invariant(a, b, phi):
    u = complex(math.cos(phi), math.sin(phi))
    assert abs(poincare_distance(a, b) - poincare_distance(u * a, u * b)) < 1e-8


def test_disc_kobayashi_is_poincare():
    res = kobayashi_upper(disc_chart(), [0], [0.5])
    assert abs(res.value - math.log(3)) < 1e-3
    assert res.kind == "upper"


def test_disc_infinitesimal_metric():
    assert abs(infinitesimal_metric_upper(disc_chart(), [0], [1]).value - 2.0) < 1e-3
    assert abs(infinitesimal_metric_upper(disc_chart(), [0], [2]).value - 4.0) < 2e-3


def test_global_heisenberg_is_small():
    cd = heisenberg_chart(float("inf"))
    res = kobayashi_upper(cd, [0, 0, 0], [1, 0, 0], {"max_radius": 1e3})
    assert res.value < 0.01


def test_unreachable_when_not_generating():
    res = kobayashi_upper(heisenberg_subframe(), [0, 0, 0], [0, 0, 0.1])
    assert isinstance(res, Unreachable) and math.isinf(res.value)


@given(st.complex_numbers(max_magnitude=0.5, allow_nan=False), st.complex_numbers(max_magnitude=0.5, allow_nan=False),
       st.complex_numbers(max_magnitude=0.3, allow_nan=False))
def test_horizontal_disc_closed_form(a, b, c):
    """f1 = a z, f2 = b z + c z^2 gives f3 = ab z^2/2 + 2ac z^3/3."""
    cd = heisenberg_chart()
    disc = horizontal_disc_from_free_part(cd, [[0, a], [0, b, c]], [0, 0, 0])
    for z in (0.3, 0.7j, -0.5 + 0.2j):
        expect = a * b * z * z / 2 + 2 * a * c * z ** 3 / 3
        assert abs(disc(z)[2] - expect) < 1e-12
    assert horizontality_residual(cd, disc) < 1e-10


def test_taylor_matches_radial_oracle():
    cd = heisenberg_chart()
    free = [[0.1, 0.5, 0.2j], [0.2, -0.3, 0.1]]
    disc = horizontal_disc_from_free_part(cd, free, [0.1, 0.2, 0.05])
    for zeta in (0.9, 0.6j):
        r = radial_rest(cd, [np.array(p, dtype=complex) for p in free], [0.05], zeta)
        assert abs(disc(zeta)[2] - r[0]) < 1e-9


def test_disc_escape_on_small_box():
    cd = heisenberg_chart(0.05)
    with pytest.raises(DiscEscape):
        horizontal_disc_from_free_part(cd, [[0, 1], [0, 1]], [0, 0, 0])


def test_cc_dilation():
    cd = heisenberg_chart(float("inf"))
    base = cc_distance_upper(cd, None, [0, 0, 0], [0, 0, 1], {"segments": 32}).value
    assert abs(base - 2 * math.sqrt(math.pi)) / (2 * math.sqrt(math.pi)) < 0.02
    for lam in (0.5, 2.0):
        d = cc_distance_upper(cd, None, [0, 0, 0], [0, 0, lam * lam], {"segments": 32}).value
        assert abs(d / base - lam) < 0.05 * lam


def test_cc_path_replays():
    cd = heisenberg_chart(float("inf"))
    res = cc_distance_upper(cd, None, [0, 0, 0], [0.3, 0, 0.2], {"segments": 16})
    end, length = replay_path(cd, res.witness)
    assert np.allclose(end, [0.3, 0, 0.2], atol=1e-6)
    assert abs(length - res.value) < 1e-9


def test_disc_cc_with_poincare_metric():
    res = cc_distance_upper(disc_chart(), poincare_metric(), [0], [0.5], {"segments": 32})
    assert abs(res.value - math.log(3)) < 5e-3


def test_schwarz_su11():
    gd = flag_domain("A1")
    cert = certify_negative_bound(gd.rf, gd, {"restarts": 4})
    rho = math.sqrt(2) * math.log(3)
    lb = schwarz_lower_bound(cert, rho, "derived")
    assert lb.kind == "lower"
    assert abs(lb.value - math.log(3)) < 1e-6
    assert schwarz_lower_bound(cert, rho, "guess").kind == "heuristic"
    with pytest.raises(InvalidCertificate):
        schwarz_lower_bound(0.0, 1.0)


def test_result_serializes():
    res = kobayashi_upper(disc_chart(), [0], [0.25])
    d = res.to_dict()
    assert d["kind"] == "upper" and d["witness"]["links"]
