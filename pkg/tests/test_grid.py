import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakconley.dyadic import NonDyadicError, as_dyadic, format_fraction, parse_dyadic
from weakconley.grid import (
    Axis,
    CubicalSet,
    GridError,
    GridMismatch,
    GridSpec,
    HullAmbiguous,
    boundary,
    closed_difference,
    closure_cells,
    collar,
    cube_dim,
    faces,
    hull,
    interior,
    refine_set,
    signed_boundary,
    star,
    top_star,
)
from weakconley.literals import LiteralError, format_set, parse_set

W = Fraction(1, 16)
CIRCLE = GridSpec((Axis.circle(Fraction(1, 2)),), W, Fraction(0), 2)  # 16 rep cells
TORUS = GridSpec((Axis.circle(Fraction(3, 8)), Axis.circle(Fraction(1, 4))), W, Fraction(0), 2)
SEGMENT = GridSpec((Axis.interval(-1, 1),), Fraction(1, 4), Fraction(1, 8), 2)
GRIDS = (CIRCLE, TORUS, SEGMENT)


@st.composite
def cubical_sets(draw, grids=GRIDS):
    g = draw(st.sampled_from(grids))
    tops = sorted(g.top_cells())
    chosen = draw(st.lists(st.sampled_from(tops), max_size=len(tops), unique=True))
    # sprinkle some lower-dimensional cells too
    low = [c for c in g.all_cells() if cube_dim(c) < g.dimension]
    extra = draw(st.lists(st.sampled_from(low), max_size=4, unique=True))
    return CubicalSet.closure_of(g, chosen + extra)


# -- dyadic scalars -----------------------------------------------------------

def test_parse_dyadic_forms():
    assert parse_dyadic("27/32") == Fraction(27, 32)
    assert parse_dyadic("-0.375") == Fraction(-3, 8)
    assert parse_dyadic("1.5e1") == 15
    with pytest.raises(NonDyadicError):
        parse_dyadic("1e-1")
    with pytest.raises(NonDyadicError):
        as_dyadic(Fraction(1, 3))
    assert format_fraction(Fraction(27, 32)) == "27/32"
    assert format_fraction(Fraction(4)) == "4"


def test_parse_dyadic_rejects_decimal_tenths():
    with pytest.raises(NonDyadicError):
        parse_dyadic("0.1")


# -- grid geometry --------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(GridError):
        GridSpec((Axis.circle(1),), W, Fraction(0), 3)
    with pytest.raises(GridError):
        GridSpec((Axis.circle(Fraction(3, 32)),), W)  # not a multiple of w
    with pytest.raises(NonDyadicError):
        Axis.circle(Fraction(1, 3))
    with pytest.raises(GridError):
        GridSpec((), W)
    with pytest.raises(GridError):
        GridSpec((Axis.interval(0, 1),), Fraction(1, 4), Fraction(0))  # bounds off the cell edges


def test_grid_json_roundtrip():
    for g in GRIDS:
        assert GridSpec.from_json(g.to_json()) == g


def test_coarse_cells_of_a_point_on_an_edge():
    g = GridSpec((Axis.circle(1),), W, Fraction(0), 4)
    assert g.coarse_cells_of_point((Fraction(0),)) == [(0,)]
    assert sorted(g.coarse_cells_of_point((Fraction(1, 32),))) == [(0,), (1,)]


def test_faces_and_star_are_dual():
    for g in GRIDS:
        cells = list(g.all_cells())
        for c in cells:
            for fc in faces(g, c):
                assert c in star(g, fc)
        for c in cells:
            assert all(cube_dim(t) == g.dimension for t in top_star(g, c))


def test_signed_boundary_squares_to_zero():
    for g in GRIDS:
        for c in g.all_cells():
            acc = {}
            for fc, s in signed_boundary(g, c):
                for ff, t in signed_boundary(g, fc):
                    acc[ff] = acc.get(ff, 0) + s * t
            assert not any(acc.values()), c


# -- cubical sets ---------------------------------------------------------------

@given(cubical_sets())
def test_closure_is_idempotent(s):
    assert s.is_face_closed()
    assert closure_cells(s.grid, s.cells) == s.cells


@given(cubical_sets())
def test_interior_and_boundary_partition(s):
    inner = interior(s)
    bd = boundary(s)
    assert inner <= s.cells
    assert bd.cells | inner == s.cells and not (bd.cells & inner)
    assert bd.is_face_closed()
    # the complement of S has interior equal to the complement of S's closure
    whole = CubicalSet.whole(s.grid)
    rest = closed_difference(whole, CubicalSet(s.grid, inner))
    assert rest.cells | s.cells == whole.cells


@given(cubical_sets(), st.integers(0, 3))
def test_collar_is_monotone(s, k):
    c = collar(s, k)
    assert s <= c and c.is_face_closed()
    assert c <= collar(s, k + 1)
    if k == 0:
        assert c == s


@given(cubical_sets())
def test_literal_roundtrip(s):
    assert parse_set(format_set(s), s.grid) == s


@given(cubical_sets())
def test_hull_contains_set(s):
    if not s.cells:
        return
    try:
        h = hull(s)
    except HullAmbiguous:
        return
    assert s <= h and h.is_face_closed()
    assert hull(h) == h


@given(cubical_sets(grids=(CIRCLE, TORUS)))
@settings(max_examples=40)
def test_refinement_preserves_top_volume(s):
    fine = s.grid.refined(s.grid.refinement * 2)
    t = refine_set(s, fine)
    assert t.is_face_closed()
    assert len(t.top_cells()) == len(s.top_cells()) * 2 ** s.grid.dimension


def test_hull_ambiguous_on_evenly_spread_cells():
    g = GridSpec((Axis.circle(1),), Fraction(1, 4), Fraction(0), 2)
    with pytest.raises(HullAmbiguous):
        hull([(0,), (2,)], g)


def test_mixing_grids_is_an_error():
    a = CubicalSet.whole(CIRCLE)
    b = CubicalSet.whole(CIRCLE.refined(4))
    with pytest.raises(GridMismatch):
        a | b


def test_literals_on_the_circle():
    g = GridSpec((Axis.circle(1),), W, Fraction(0), 4)
    s = parse_set("[15/16, 1/16]", g)  # wraps through 0
    assert len(s.top_cells()) == 8
    assert format_set(s) == "[15/16, 1/16]"
    assert parse_set("whole", g) == CubicalSet.whole(g)
    assert format_set(parse_set("{1/4} u {3/4}", g)) == "{1/4} u {3/4}"
    with pytest.raises(LiteralError):
        parse_set("[1/3, 1/2]", g)
    with pytest.raises(LiteralError):
        parse_set("[0, 1/4] x [0, 1/4]", g)


def test_product_literal_on_torus():
    s = parse_set("[0, 1/8] x [1/16, 1/8]", TORUS)
    assert len(s.top_cells()) == 4 * 2
    assert parse_set(format_set(s), TORUS) == s


@given(st.data())
def test_hull_is_monotone(data):
    g = data.draw(st.sampled_from((CIRCLE, TORUS)))
    coarse = list(itertools.product(*(range(m) for m in g.coarse_shape)))
    a = data.draw(st.lists(st.sampled_from(coarse), min_size=1, max_size=5, unique=True))
    extra = data.draw(st.lists(st.sampled_from(coarse), max_size=5, unique=True))
    try:
        ha, hb = hull(a, g), hull(a + extra, g)
    except HullAmbiguous:
        return
    assert ha <= hb


def test_hull_refuses_half_circle():
    g = GridSpec((Axis.circle(1),), Fraction(1, 8), Fraction(0), 2)
    assert len(hull([(7,), (1,)], g).top_cells()) == 3 * 2  # short arc through 0
    with pytest.raises(HullAmbiguous):
        hull([(0,), (1,), (2,), (3,)], g)
