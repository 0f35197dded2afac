"""Complex flows of polynomial fields and Chow connection on charts."""
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subkoba.errors import DegenerateFrame, FlowEscape, NoConnection
from subkoba.flows import (ChartDistribution, FlowWord, StepConfig, _commutator, chart_bracket_generating,
                           chow_connect, compose_flows, degenerate_chart, engel_chart, expand_stage,
                           heisenberg_chart, heisenberg_subframe, integrate_complex_flow, jacobian_at_zero)
from subkoba.polynomials import PolyField, gens

cplx = st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False)


@given(st.lists(cplx, min_size=3, max_size=3), cplx)
def test_heisenberg_x2_closed_form(z, t):
    cd = heisenberg_chart(float("inf"))
    out = integrate_complex_flow(cd.frame[1], z, t)
    expect = [z[0], z[1] + t, z[2] + z[0] * t]
    assert np.allclose(out, expect, atol=1e-12)


@given(st.lists(cplx, min_size=4, max_size=4), cplx)
def test_engel_x2_closed_form(z, t):
    cd = engel_chart()
    out = integrate_complex_flow(cd.frame[1], z, t)
    expect = [z[0], z[1] + t, z[2] + z[0] * t, z[3] + z[2] * t + z[0] * t * t / 2]
    assert np.allclose(out, expect, atol=1e-11)


def test_riccati_flow_and_escape():
    """z' = z^2 has z(t) = z0 / (1 - z0 t); it escapes before t = 1/z0."""
    X = PolyField.from_exprs([gens(1)[0] ** 2], 1)
    out = integrate_complex_flow(X, [0.5], 1.0)
    assert abs(out[0] - 1.0) < 1e-10
    with pytest.raises(FlowEscape):
        integrate_complex_flow(X, [0.5], 3.0, StepConfig(escape_radius=10.0))


@pytest.mark.parametrize("t", [0.1, 0.5])
def test_commutator_endpoint(t):
    cd = heisenberg_chart()
    end = compose_flows(cd, _commutator(1, 2, t), [0, 0, 0])
    assert np.allclose(end, [0, 0, -t * t], atol=1e-8)


def test_expand_stage_moves_along_bracket():
    cd = heisenberg_chart()
    for t in (0.04, -0.09, 0.05j):
        end = compose_flows(cd, expand_stage((1, 2), t), [0, 0, 0])
        assert np.allclose(end, [0, 0, t], atol=1e-12)


def test_jacobian_at_zero():
    cd = heisenberg_chart()
    assert np.allclose(jacobian_at_zero(cd), np.eye(3), atol=1e-6)
    J = jacobian_at_zero(cd, base=[1, 0, 0])
    assert np.allclose(J, [[1, 0, 0], [0, 1, 0], [0, 1, 1]], atol=1e-6)


def test_degenerate_frame():
    with pytest.raises(DegenerateFrame):
        jacobian_at_zero(degenerate_chart())


def test_bracket_generating_report():
    assert chart_bracket_generating(heisenberg_chart(), [0, 0, 0])["depth"] == 2
    assert chart_bracket_generating(engel_chart(), [0, 0, 0, 0])["depth"] == 3
    assert not chart_bracket_generating(heisenberg_subframe(), [0, 0, 0])["generating"]


def test_connect_and_replay_bit_exact():
    cd = heisenberg_chart()
    w = chow_connect(cd, [0, 0, 0], [0.2, -0.1, 0.3 + 0.1j])
    assert w.error < 1e-9
    again = w.replay(cd)
    assert again == w.endpoint
    w2 = FlowWord.from_dict(json.loads(w.to_json()))
    assert w2.replay(cd) == w.endpoint


def test_connect_stages_are_horizontal():
    w = chow_connect(heisenberg_chart(), [0, 0, 0], [0, 0, -0.01])
    assert all(isinstance(g, int) for g, _ in w.stages)


def test_engel_connects():
    cd = engel_chart()
    w = chow_connect(cd, [0] * 4, [0.1, 0.1, 0.05, 0.02])
    assert w.error < 1e-9


def test_no_connection_for_subframe():
    with pytest.raises(NoConnection):
        chow_connect(heisenberg_subframe(), [0, 0, 0], [0, 0, 0.1])


def test_chart_round_trip():
    cd = engel_chart()
    cd2 = ChartDistribution.from_dict(cd.to_dict())
    z = [0.1, 0.2j, -0.3, 0.4]
    assert np.allclose(cd.frame_matrix(z), cd2.frame_matrix(z))
    assert cd2.completion == cd.completion
