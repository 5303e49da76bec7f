import itertools
from fractions import Fraction as Q

import pytest

from hornvol.bzpolytope import (
    DegeneratePolygonError,
    HalfPlane,
    RationalPolygon,
    UnboundedPolygonError,
    boundary_interior_counts,
    bz_polygon_b2,
    degeneracy_info,
    lattice_point_count,
    pick_relation_check,
    polygon_area,
)
from hornvol.multiplicity import lr_klimyk
from hornvol.rootsys import build_root_system, is_compatible

B2 = build_root_system("B", 2)


def reduced_system_563456() -> RationalPolygon:
    """The symbolically reduced half-plane system for (5,6), (3,4), (5,6), strictness included."""
    return RationalPolygon(
        [
            HalfPlane(1, 0, 0),                      # 0 <= x
            HalfPlane(-1, 0, -6, strict=True),       # x < 6
            HalfPlane(0, 1, 0),                      # 0 <= y
            HalfPlane(0, -1, -3),                    # y <= 3
            HalfPlane(1, -2, -3),                    # x + 3 >= 2y
            HalfPlane(1, 2, 3),                      # 3 <= x + 2y
            HalfPlane(-1, -2, -7),                   # x + 2y <= 7
            HalfPlane(-1, -1, -5),                   # x + y <= 5
        ],
        elim=(Q(5), Q(7)),
    )


def test_system_matches_reduced_form():
    P = bz_polygon_b2((5, 6), (3, 4), (5, 6))
    reduced = reduced_system_563456()
    assert set(P.vertices) == set(reduced.vertices)
    assert lattice_point_count(P) == lattice_point_count(reduced) == 10
    assert P.area() == reduced.area() == 6


def test_first_example_polygon():
    P = bz_polygon_b2((5, 6), (3, 4), (5, 6))
    assert P.dim == 2
    assert lattice_point_count(P) == 10
    assert polygon_area(P) == 6
    # corners are not integral
    assert any(v[0].denominator > 1 or v[1].denominator > 1 for v in P.vertices)
    b, i = boundary_interior_counts(P)
    assert (b, i) == (7, 3)


def test_second_example_polygon():
    P = bz_polygon_b2((5, 6), (3, 4), (6, 4))
    assert lattice_point_count(P) == 10
    assert polygon_area(P) == Q(11, 2)


def test_third_example_polygon():
    P = bz_polygon_b2((5, 6), (3, 4), (2, 10))
    assert lattice_point_count(P) == 8
    assert polygon_area(P) == Q(7, 2)
    assert boundary_interior_counts(P)[1] == 1


def test_fig8_polygon():
    P = bz_polygon_b2((4, 7), (5, 3), (2, 4))
    assert lattice_point_count(P) == 5
    assert polygon_area(P) == Q(7, 4)
    assert any(v[0].denominator > 1 or v[1].denominator > 1 for v in P.vertices)


def test_empty_polygon():
    # sigma has a negative simple-root coordinate: Part(sigma) is empty
    P = bz_polygon_b2((0, 0), (0, 0), (2, 0))
    assert P.dim == -1
    assert lattice_point_count(P) == 0
    assert boundary_interior_counts(P) == (0, 0)
    assert degeneracy_info(P).kind == "Empty"


def test_rational_triples_allowed():
    P = bz_polygon_b2((Q(9, 2), Q(7)), (Q(5), Q(3)), (Q(5, 2), Q(4)))
    assert P.dim == 2


def test_dominance_required():
    with pytest.raises(ValueError):
        bz_polygon_b2((-1, 0), (1, 0), (0, 0))


def test_integrality_filter():
    # compatible triple: counting is plain 2-D counting
    P = bz_polygon_b2((5, 6), (3, 4), (5, 6))
    assert lattice_point_count(P, integrality_filter=False) == 10
    # non-compatible triple: the filter kills every point, raw counting does not
    P2 = bz_polygon_b2((1, 1), (1, 1), (1, 1))
    assert lattice_point_count(P2) == 0
    assert lattice_point_count(P2, integrality_filter=False) > 0


def test_count_matches_klimyk_and_zero_when_incompatible():
    for lam in itertools.product(range(3), range(3)):
        for mu in itertools.product(range(3), range(3)):
            for nu in itertools.product(range(4), range(4)):
                c = lattice_point_count(bz_polygon_b2(lam, mu, nu))
                if is_compatible(B2, lam, mu, nu):
                    assert c == lr_klimyk(B2, lam, mu, nu)
                else:
                    assert c == 0


def test_area_swap_invariance():
    for lam, mu, nu in [((5, 6), (3, 4), (5, 6)), ((4, 7), (5, 3), (2, 4)), ((2, 2), (3, 1), (1, 3))]:
        P1 = bz_polygon_b2(lam, mu, nu)
        P2 = bz_polygon_b2(mu, lam, nu)
        a1 = P1.area() if P1.dim == 2 else Q(0)
        assert a1 == (P2.area() if P2.dim == 2 else Q(0))


def test_dilation_scales_vertices():
    P = bz_polygon_b2((5, 6), (3, 4), (5, 6))
    for s in (2, 3, 5):
        Q1 = P.dilate(s)
        Q2 = bz_polygon_b2((5 * s, 6 * s), (3 * s, 4 * s), (5 * s, 6 * s))
        assert set(Q1.vertices) == {(s * x, s * y) for x, y in P.vertices}
        assert set(Q1.vertices) == set(Q2.vertices)


def test_pick_relation_worked_examples():
    rep = pick_relation_check(bz_polygon_b2((5, 6), (3, 4), (5, 6)))
    assert rep.p == Q(3, 4)
    assert rep.holds
    assert rep.L == rep.boundary == 7
    rep3 = pick_relation_check(bz_polygon_b2((5, 6), (3, 4), (2, 10)))
    assert rep3.p == 1
    assert rep3.holds


def test_pick_relation_integral_square():
    square = RationalPolygon([
        HalfPlane(1, 0, 0), HalfPlane(-1, 0, -1),
        HalfPlane(0, 1, 0), HalfPlane(0, -1, -1),
    ])
    rep = pick_relation_check(square)
    assert rep.p == 1
    assert rep.holds
    assert rep.count == 4 and rep.area == 1 and rep.boundary == 4 and rep.interior == 0


def test_degeneracy_classification():
    seg = bz_polygon_b2((5, 6), (3, 4), (0, 10))
    info = degeneracy_info(seg)
    assert info.kind == "Segment"
    assert info.relative_length == 2
    assert lattice_point_count(seg) == 3
    # whenever C = 1 the polygon is a point
    pt = bz_polygon_b2((1, 0), (1, 0), (2, 0))
    assert lr_klimyk(B2, (1, 0), (1, 0), (2, 0)) == 1
    assert degeneracy_info(pt).kind == "Point"
    assert degeneracy_info(bz_polygon_b2((5, 6), (3, 4), (5, 6))).kind == "Full"


def test_polygon_area_raises_on_degenerate():
    with pytest.raises(DegeneratePolygonError):
        polygon_area(bz_polygon_b2((5, 6), (3, 4), (0, 10)))
    with pytest.raises(DegeneratePolygonError):
        pick_relation_check(bz_polygon_b2((5, 6), (3, 4), (0, 10)))


def test_unbounded_region_rejected():
    P = RationalPolygon([HalfPlane(1, 0, 0), HalfPlane(0, 1, 0)])
    assert not P.is_bounded()
    with pytest.raises(UnboundedPolygonError):
        P.lattice_count()


def test_vertices_satisfy_two_halfplanes_with_equality():
    P = bz_polygon_b2((5, 6), (3, 4), (5, 6))
    for v in P.vertices:
        tight = sum(1 for h in P.halfplanes if h.value(v) == 0)
        assert tight >= 2
        assert all(h.value(v) >= 0 for h in P.halfplanes)


def test_json_serialization():
    P = bz_polygon_b2((5, 6), (3, 4), (5, 6))
    d = P.to_json_dict()
    assert d["dim"] == 2
    assert len(d["halfplanes"]) == 12
    assert ["3", "2"] in d["vertices"]
