import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoheat import catalog
from isoheat.errors import InvalidAngle, InvalidRatio, UnsupportedConfiguration
from isoheat.geometry import (
    BC,
    Rectangle,
    RightIsoTriangle,
    Scaled,
    corner_coefficient,
    polygon_invariants,
    scale,
    union,
    vertex_term,
)

PI = math.pi
SQRT2 = math.sqrt(2.0)


def test_rectangle_invariants():
    p = polygon_invariants(Rectangle(1, 2))
    assert p.area == 2
    assert p.boundary_length == 6
    assert p.dirichlet_length == 6
    assert [c.angle for c in p.corners] == [PI / 2] * 4
    assert p.all_dirichlet


def test_triangle_invariants():
    p = polygon_invariants(RightIsoTriangle(2))
    assert p.area == pytest.approx(2, rel=1e-15)
    assert p.boundary_length == pytest.approx(4 + 2 * SQRT2, rel=1e-15)
    assert sorted(c.angle for c in p.corners) == [PI / 4, PI / 4, PI / 2]


def test_dirichlet_lengths_of_two_piece_bands():
    a, b = catalog.bands_minus_ef()
    assert polygon_invariants(a).dirichlet_length == pytest.approx(6 + 2 * SQRT2, abs=1e-14)
    assert polygon_invariants(b).dirichlet_length == pytest.approx(7 + SQRT2, abs=1e-14)


def test_neumann_edge_reduces_dirichlet_length():
    p = polygon_invariants(RightIsoTriangle(SQRT2, "DND"))
    assert p.boundary_length == pytest.approx(2 * SQRT2 + 2)
    assert p.dirichlet_length == pytest.approx(SQRT2 + 2)
    assert p.neumann_edges == (1,)


def test_bc_from_strings():
    r = Rectangle(1, 1, "DDDN")
    assert r.bc == (BC.D, BC.D, BC.D, BC.N)
    with pytest.raises(ValueError):
        Rectangle(1, 1, "DDD")
    with pytest.raises(ValueError):
        Rectangle(-1, 1)


@pytest.mark.parametrize("d", [Rectangle(1, 2), Rectangle(0.3, 7), catalog.square()])
def test_vertex_term_rectangle(d):
    assert vertex_term(polygon_invariants(d)) == pytest.approx(0.25, abs=1e-15)


@pytest.mark.parametrize("leg", [0.5, 1.0, SQRT2, 3.0])
def test_vertex_term_triangle(leg):
    # 1/16 from the right angle, 5/32 from each pi/4 corner
    assert vertex_term(polygon_invariants(RightIsoTriangle(leg))) == pytest.approx(3 / 8, abs=1e-15)


def test_vertex_term_rejects_neumann_corner():
    with pytest.raises(UnsupportedConfiguration):
        vertex_term(polygon_invariants(catalog.mixed_square()))


def test_corner_coefficient_right_angle():
    assert abs(corner_coefficient(PI / 2) - 4 / PI) < 1e-10


def test_corner_coefficient_straight_angle():
    assert corner_coefficient(PI) == 0.0


def test_corner_coefficient_quarter_against_mpmath():
    g = mpmath.pi / 4
    f = lambda x: 4 * mpmath.sinh((mpmath.pi - g) * x) / (mpmath.sinh(mpmath.pi * x) * mpmath.cosh(g * x))
    with mpmath.workdps(30):
        ref = mpmath.quad(f, [0, 1, 5, mpmath.inf])
    assert abs(corner_coefficient(PI / 4) - float(ref)) < 1e-10


def test_corner_coefficient_monotone():
    angles = np.linspace(0.1, PI, 20)
    c = np.array([corner_coefficient(g) for g in angles])
    assert np.all(np.diff(c) < 0)
    assert corner_coefficient(PI / 4) > corner_coefficient(PI / 2) > corner_coefficient(3 * PI / 4) > 0


@pytest.mark.parametrize("gamma", [0.3, PI / 3, 2.0])
def test_corner_coefficient_tolerance_halving(gamma):
    a = corner_coefficient(gamma, 1e-8)
    b = corner_coefficient(gamma, 5e-9)
    assert abs(a - b) <= 1.5e-8


@pytest.mark.parametrize("gamma", [0.0, -1.0, PI + 1e-9, 4.0])
def test_corner_coefficient_invalid(gamma):
    with pytest.raises(InvalidAngle):
        corner_coefficient(gamma)


def test_scale_rectangle():
    s = scale(Rectangle(1, 2), 1 / SQRT2)
    assert isinstance(s, Rectangle)
    assert s.a == pytest.approx(1 / SQRT2)
    assert s.b == pytest.approx(SQRT2)
    assert polygon_invariants(s).area == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("alpha", [0.0, -2.0])
def test_scale_invalid(alpha):
    with pytest.raises(InvalidRatio):
        scale(Rectangle(1, 2), alpha)
    with pytest.raises(InvalidRatio):
        Scaled(Rectangle(1, 2), alpha)


domains = st.sampled_from([
    Rectangle(1, 2),
    RightIsoTriangle(2),
    RightIsoTriangle(SQRT2, "DND"),
    catalog.mixed_square(),
    catalog.chapman_pair()[0],
    catalog.example4()[1],
])


@settings(max_examples=40, deadline=None)
@given(d=domains, alpha=st.floats(0.05, 20.0))
def test_scaling_properties(d, alpha):
    p, q = polygon_invariants(d), polygon_invariants(scale(d, alpha))
    r = polygon_invariants(Scaled(d, alpha))
    for x in (q, r):
        assert x.area == pytest.approx(alpha**2 * p.area, rel=1e-13)
        assert x.boundary_length == pytest.approx(alpha * p.boundary_length, rel=1e-13)
        assert x.dirichlet_length == pytest.approx(alpha * p.dirichlet_length, rel=1e-13)
        assert [c.angle for c in x.corners] == [c.angle for c in p.corners]
        assert [c.kind for c in x.corners] == [c.kind for c in p.corners]


@settings(max_examples=30, deadline=None)
@given(a=domains, b=domains)
def test_union_additivity(a, b):
    pa, pb, pu = (polygon_invariants(x) for x in (a, b, union(a, b)))
    assert pu.area == pytest.approx(pa.area + pb.area, rel=1e-14)
    assert pu.dirichlet_length == pytest.approx(pa.dirichlet_length + pb.dirichlet_length, rel=1e-14)
    assert len(pu.corners) == len(pa.corners) + len(pb.corners)
