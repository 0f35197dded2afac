"""Holomorphic curvature of the invariant metric on the superhorizontal bundle."""
import random
from fractions import Fraction

import pytest

from subkoba import exact as ex
from subkoba.curvature import (bisectional_curvature, certify_negative_bound, compact_term_check,
                               curvature_tensor, frame_roots, frame_vector, invariant_metric,
                               sectional_curvature, tensor_bisectional)
from subkoba.errors import DomainError, NotNegative
from subkoba.fixtures import load_alg
from subkoba.grading import flag_domain


@pytest.fixture(scope="module")
def su21():
    return flag_domain("A2")


def rand_coords(rng, m):
    while True:
        z = [ex.gauss(Fraction(rng.randint(-9, 9), rng.randint(1, 6)),
                      Fraction(rng.randint(-9, 9), rng.randint(1, 6))) for _ in range(m)]
        if any(z):
            return z


def test_su11_sectional_exact():
    gd = flag_domain("A1")
    z = gd.bd.e((-1,))
    assert sectional_curvature(gd.rf, gd, z) == Fraction(-1, 2)
    g = invariant_metric(gd.rf, z, z, gd)
    assert g.y == 0 and g.x > 0


@pytest.mark.parametrize("t", ["A2", "A3"])
def test_dual_route_agreement(t):
    gd = flag_domain(t)
    T = curvature_tensor(gd.rf, gd)
    rng = random.Random(7)
    m = len(frame_roots(gd))
    for _ in range(20):
        z, w = rand_coords(rng, m), rand_coords(rng, m)
        direct = bisectional_curvature(gd.rf, gd, frame_vector(gd, z), frame_vector(gd, w))
        assert tensor_bisectional(gd.rf, gd, T, z, w) == direct


def test_metric_hermitian_positive(su21):
    rng = random.Random(3)
    for _ in range(10):
        a = frame_vector(su21, rand_coords(rng, 2))
        b = frame_vector(su21, rand_coords(rng, 2))
        gab = invariant_metric(su21.rf, a, b, su21)
        gba = invariant_metric(su21.rf, b, a, su21)
        assert gab == ex.conj(gba)
        assert invariant_metric(su21.rf, a, a).x > 0


def test_domain_errors(su21):
    with pytest.raises(DomainError):
        sectional_curvature(su21.rf, su21, [ex.ZERO] * su21.dim)
    with pytest.raises(DomainError):
        sectional_curvature(su21.rf, su21, su21.bd.e((1, 0)))


@pytest.mark.parametrize("t,c", [("A1", Fraction(1, 2)), ("A2", Fraction(1, 12))])
def test_certificate_value(t, c):
    gd = flag_domain(t)
    cert = certify_negative_bound(gd.rf, gd, {"restarts": 8})
    assert abs(cert.c - float(c)) < 1e-10
    assert cert.spread < 1e-8
    # the exact sample at the rationalized argmax is itself a curvature value
    assert abs(cert.exact_sample["value"] + cert.c) < 1e-6


def test_bound_dominates_random_directions(su21):
    """H(zeta) <= -c for every direction once c is certified."""
    cert = certify_negative_bound(su21.rf, su21, {"restarts": 8})
    rng = random.Random(11)
    for _ in range(50):
        h = sectional_curvature(su21.rf, su21, frame_vector(su21, rand_coords(rng, 2)))
        assert float(h) <= -cert.c + 1e-12


def test_compact_raises_not_negative(fixtures_dir):
    fx = load_alg(fixtures_dir / "su2_compact.alg")
    with pytest.raises(NotNegative) as e:
        certify_negative_bound(fx.gd.rf, fx.gd)
    assert e.value.witness is not None


@pytest.mark.parametrize("t", ["A2", "A3", "C2"])
def test_compact_term_signs(t):
    gd = flag_domain(t)
    for a, sign, Q in compact_term_check(gd.rf, gd):
        assert Q > 0
        assert sign == (1 if gd.rf.is_compact(a) else -1)


def test_seed_determinism(su21):
    a = certify_negative_bound(su21.rf, su21, {"restarts": 4, "seed": 5})
    b = certify_negative_bound(su21.rf, su21, {"restarts": 4, "seed": 5})
    assert a.to_json() == b.to_json()
