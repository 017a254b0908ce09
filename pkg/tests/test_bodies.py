"""Convex body specs: membership, volumes, radii, boundary distances."""

import math

import numpy as np
import pytest
from scipy.special import gamma

from jumpkit import ConvexBodySpec, InvalidArgumentError


def test_box_volume_and_membership():
    body = ConvexBodySpec.box((0.5, 0.5))
    assert body.volume() == pytest.approx(1.0, abs=1e-12)
    inside = body.contains(np.array([[0.0, 0.0], [0.49, -0.49]]))
    outside = body.contains(np.array([[0.51, 0.0], [1.0, 1.0]]))
    assert inside.all() and not outside.any()


def test_offset_box_membership():
    body = ConvexBodySpec.box((1.0, 2.0), center=(3.0, 0.0))
    assert body.contains(np.array([[3.5, 1.5]])).all()
    assert not body.contains(np.array([[1.5, 0.0]])).any()
    assert body.volume() == pytest.approx(8.0, abs=1e-12)


def test_ball_volumes_match_gamma_formula():
    # |B_q^k(r)| = r^k (2 Gamma(1+1/q))^k / Gamma(1+k/q)
    cases = [(2, 2.0, 1.0, math.pi), (2, 1.0, 1.0, 2.0), (3, math.inf, 1.0, 8.0)]
    for dim, q, r, want in cases:
        assert ConvexBodySpec.lq_ball(dim, q, r).volume() == pytest.approx(want, rel=1e-12)
    q, dim, r = 4.0, 3, 1.5
    want = r**dim * (2.0 * gamma(1.0 + 1.0 / q)) ** dim / gamma(1.0 + dim / q)
    assert ConvexBodySpec.lq_ball(dim, q, r).volume() == pytest.approx(want, rel=1e-12)


def test_ball_membership_general_q():
    body = ConvexBodySpec.lq_ball(2, 3.0, 1.0)
    pts = np.array([[0.9, 0.0], [0.8, 0.8], [0.9, 0.9]])
    # ||(0.8, 0.8)||_3 = 0.8 * 2^(1/3) > 1
    assert list(body.contains(pts)) == [True, False, False]


def test_radii_and_diameter():
    square = ConvexBodySpec.box((0.5, 0.5))
    assert square.circumradius() == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert square.inradius() == pytest.approx(0.5, abs=1e-12)
    assert square.diameter() == pytest.approx(math.sqrt(2.0), abs=1e-12)

    cross = ConvexBodySpec.lq_ball(2, 1.0, 2.0)
    assert cross.circumradius() == pytest.approx(2.0, abs=1e-12)
    assert cross.inradius() == pytest.approx(2.0 / math.sqrt(2.0), abs=1e-12)

    # q > 2: corner of the ball sticks out by d^(1/2 - 1/q)
    b4 = ConvexBodySpec.lq_ball(3, 4.0, 1.0)
    assert b4.circumradius() == pytest.approx(3.0 ** (1.0 / 2.0 - 1.0 / 4.0), rel=1e-12)


def test_bounding_half_widths():
    body = ConvexBodySpec.box((1.0, 2.0), center=(0.5, -0.5))
    hw = body.bounding_half_widths(margin=0.25)
    assert np.allclose(hw, [1.75, 2.75])
    assert body.max_extent_from_origin() == pytest.approx(math.hypot(1.5, 2.5), abs=1e-12)


def test_boundary_distance_euclidean_ball():
    body = ConvexBodySpec.lq_ball(2, 2.0, 1.0)
    pts = np.array([[0.5, 0.0], [2.0, 0.0], [0.0, 0.0]])
    d = body.boundary_distance(pts)
    assert np.allclose(d, [0.5, 1.0, 1.0], atol=1e-12)


def test_boundary_distance_box_gauge():
    # per-axis gauge: the s-shell of a box is exactly the grown minus the
    # shrunk box, so corner points are measured per axis, not euclidean
    body = ConvexBodySpec.box((0.5, 0.5))
    pts = np.array([[0.6, 0.6], [0.4, 0.4], [0.0, 0.3]])
    d = body.boundary_distance(pts)
    assert np.allclose(d, [0.1, 0.1, 0.2], atol=1e-12)


def test_boundary_distance_l1_ball():
    body = ConvexBodySpec.lq_ball(2, 1.0, 1.0)
    # exterior point on the axis: nearest simplex face point is (1, 0)
    d = body.boundary_distance(np.array([[2.0, 0.0], [0.0, 0.0]]))
    assert d[0] == pytest.approx(1.0, abs=1e-12)
    assert d[1] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)


def test_boundary_distance_bisection_on_axis():
    # general q runs radial bisection; along an axis the boundary is at
    # radius r, so the offset is exact up to the bisection tolerance
    body = ConvexBodySpec.lq_ball(2, 3.0, 1.0)
    d = body.boundary_distance(np.array([[1.2, 0.0], [0.7, 0.0]]))
    assert d[0] == pytest.approx(0.2, abs=1e-9)
    assert d[1] == pytest.approx(0.3, abs=1e-9)


def test_distance_exact_flag():
    # closed forms exist for boxes and q in {1, 2, inf}; other q bisect
    assert ConvexBodySpec.box((0.5, 0.5)).distance_exact
    for q in (1.0, 2.0, math.inf):
        assert ConvexBodySpec.lq_ball(2, q).distance_exact
    assert not ConvexBodySpec.lq_ball(2, 3.0).distance_exact


def test_validation():
    with pytest.raises(InvalidArgumentError):
        ConvexBodySpec.lq_ball(2, 0.5)
    with pytest.raises(InvalidArgumentError):
        ConvexBodySpec.lq_ball(0, 2.0)
    with pytest.raises(InvalidArgumentError):
        ConvexBodySpec.box(())
    with pytest.raises(InvalidArgumentError):
        ConvexBodySpec.box((1.0, -1.0))


def test_dict_round_trip():
    bodies = [
        ConvexBodySpec.box((0.5, 1.5), center=(1.0, 0.0)),
        ConvexBodySpec.lq_ball(3, 2.0, 0.7),
        ConvexBodySpec.lq_ball(2, math.inf, 1.2),
    ]
    for body in bodies:
        again = ConvexBodySpec.from_dict(body.to_dict())
        assert again == body
        pts = np.random.default_rng(5).uniform(-2, 2, size=(64, body.dim))
        assert np.array_equal(again.contains(pts), body.contains(pts))
