import math

import pytest

import pdkernels as pk


def test_gegenbauer_endpoint():
    # C_3^1(1) = 4
    assert pk.gegenbauer(1.0, 3, 1.0) == pytest.approx(4.0, rel=1e-14)
    assert pk.gegenbauer_at_one(0.5, 7) == pytest.approx(1.0, rel=1e-14)


def test_gauss_rule_weights_sum_to_one():
    nodes, weights = pk.gauss_rule(1.0, 12)
    assert len(nodes) == 12
    assert sum(weights) == pytest.approx(1.0, abs=1e-14)


def test_projection_of_legendre_polynomial():
    # P_2(t) = (3t^2 - 1)/2 is its own expansion at lambda = 1/2
    coeffs, negatives = pk.project_coefficients(lambda t: 1.5 * t * t - 0.5, 0.5, 4)
    assert coeffs[2] == pytest.approx(1.0, abs=1e-12)
    assert all(abs(c) < 1e-12 for i, c in enumerate(coeffs) if i != 2)
    assert negatives == []


def test_embedding_preserves_distance_on_ball():
    ball = pk.Domain("ball:d=2")
    p, q = pk.sample(ball, 2, 11)
    ep, eq = pk.embed(p), pk.embed(q)
    assert sum(a * b for a, b in zip(ep, eq)) == pytest.approx(pk.cos_distance(p, q), abs=1e-12)


def test_kernel_psd_and_interpolation_roundtrip():
    ball = pk.Domain("ball:d=2")
    series = pk.CoefficientSeries(0.5, [1.0] * 13)
    pts = pk.sample(ball, 25, 3)
    k = pk.kernel_matrix(series, pts)
    assert k.shape == (25, 25)
    assert pk.psd_check(k)["is_pd"]
    values = [math.sin(3 * p.coords[0]) + p.coords[1] for p in pts]
    g = pk.fit(series, pts, values)
    back = pk.evaluate(g, pts)
    assert max(abs(a - b) for a, b in zip(back, values)) < 1e-9


def test_duplicate_points_rejected():
    ball = pk.Domain("ball:d=2")
    p = pk.Point(ball, [0.1, 0.2])
    series = pk.CoefficientSeries(0.5, [1.0, 1.0])
    with pytest.raises(ValueError):
        pk.fit(series, [p, p], [1.0, 2.0])


def test_bad_domain_spec_is_value_error():
    with pytest.raises(ValueError):
        pk.Domain("torus:d=2")


def test_rank_collapse_suite():
    r = pk.verify_rank_collapse(pk.Domain("ball:d=2"), 2, 1)
    assert r["failures"] == 0
    assert r["details"]["rank_estimate"] <= 10


def test_distance_suite_reports():
    r = pk.verify_distance_preservation(pk.Domain("simplex:d=3"), 1000, 1)
    assert r == {**r, "suite": "distance", "trials": 1000, "failures": 0}
