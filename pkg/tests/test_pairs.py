import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakconley.audits import constructed_pairs, f_boundary_on_bd, pair_algebra_checks, suite_pairs
from weakconley.dynamics import forward_closure, image, invariant_parts
from weakconley.fixtures import (
    CONTRACTING_N,
    EXAMPLE1_N,
    EXAMPLE1_P2,
    EXAMPLE2_P2,
    contracting_map,
    example_set,
)
from weakconley.grid import CubicalSet, boundary, interior
from weakconley.isolation import f_boundary
from weakconley.literals import format_set
from weakconley.pairs import (
    CubicalPair,
    NotIsolating,
    NotWeakPair,
    PairError,
    PreconditionViolated,
    SearchTooLarge,
    ShapeMismatch,
    check_pair,
    construct_weak_index_pair,
    find_strict_pair,
    g_operator,
    intersect,
    make_t,
    make_t_strict,
    mixed_lower,
    mixed_upper,
    pair_algebra,
    restrict_pair,
    search_index_pairs,
    squeeze_sequence,
)
from weakconley.random_systems import random_isolated_system


def pair(grid, p1, p2):
    return CubicalPair(example_set(grid, p1), example_set(grid, p2))


# -- axioms on hand-made pairs ----------------------------------------------

def test_hand_made_pair_example1(dmap, ex1):
    n, s = ex1
    rep = check_pair(dmap, n, pair(dmap.grid, EXAMPLE1_N, EXAMPLE1_P2))
    assert rep.weak
    assert not rep.b_prime and not rep.strict
    assert rep.witnesses["b_prime"]["image"] == "[27/32, 5/32]"


def test_hand_made_pair_example2(dmap, ex2):
    n, _ = ex2
    rep = check_pair(dmap, n, CubicalPair(n, example_set(dmap.grid, EXAMPLE2_P2)))
    assert rep.weak and not rep.b_prime


def test_empty_exit_set_breaks_b_and_d(dmap, ex1):
    n, _ = ex1
    rep = check_pair(dmap, n, CubicalPair(n, CubicalSet.empty(dmap.grid)))
    assert rep.a and rep.c and not rep.b and not rep.d
    assert rep.witnesses["b"] == rep.witnesses["d"] == "{1/16} u {15/16}"


def test_pair_too_small_breaks_c(dmap, ex1):
    n, s = ex1
    rep = check_pair(dmap, n, CubicalPair(s, s))
    assert not rep.c


def test_p1_outside_n(dmap, ex1):
    n, _ = ex1
    with pytest.raises(PreconditionViolated):
        check_pair(dmap, n, pair(dmap.grid, "[7/8, 1/8]", "{7/8}"))


def test_p2_must_lie_in_p1(dmap):
    with pytest.raises(ValueError):
        pair(dmap.grid, "{0}", "{1/2}")


# -- construction -------------------------------------------------------------

def test_construction_on_examples(dmap, ex1, ex2):
    p = construct_weak_index_pair(dmap, ex1[0])
    assert p.to_json() == {"p1": "[15/16, 1/16]", "p2": "[3/64, 1/16] u [15/16, 61/64]"}
    q = construct_weak_index_pair(dmap, ex2[0])
    assert q.to_json() == {"p1": format_set(ex2[0]), "p2": EXAMPLE2_P2}


def test_construction_refuses_non_isolating(dmap):
    n = example_set(dmap.grid, "[31/32, 33/32]")
    with pytest.raises(NotIsolating):
        construct_weak_index_pair(dmap, n)


def test_construction_with_empty_invariant_set(dmap):
    # the fixed point 0 repels; the cell [1/4, 5/16] has no invariant part
    n = example_set(dmap.grid, "[7/32, 11/32]")
    assert not invariant_parts(dmap, n).inv
    p = construct_weak_index_pair(dmap, n)
    assert not p.p1 and not p.p2


def test_contracting_pair_is_strict():
    f = contracting_map()
    n = example_set(f.grid, CONTRACTING_N)
    p = construct_weak_index_pair(f, n)
    rep = check_pair(f, n, p)
    assert rep.weak and rep.strict


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_constructed_pairs_are_weak(seed):
    sys = random_isolated_system(seed, dim=1 + (seed % 5 == 0))
    for p in constructed_pairs(sys.f, sys.n):
        rep = check_pair(sys.f, sys.n, p)
        assert rep.weak, rep.witnesses
        assert f_boundary_on_bd(sys.f, sys.n, p)


# -- properties of pairs ---------------------------------------------------

def test_restriction_to_a_smaller_neighbourhood(dmap, ex1):
    n, _ = ex1
    p = construct_weak_index_pair(dmap, n)
    m = example_set(dmap.grid, "[61/64, 3/64]")
    q = restrict_pair(dmap, p, m, n)
    assert q.open_difference == p.open_difference
    assert check_pair(dmap, m, q).weak
    with pytest.raises(PreconditionViolated):
        restrict_pair(dmap, p, example_set(dmap.grid, "[31/32, 1/32]"), n)


def test_bd_f_of_p1_on_bd_n(dmap, ex1, ex2):
    for n, _ in (ex1, ex2):
        p = construct_weak_index_pair(dmap, n)
        assert f_boundary(dmap, p.p1) <= boundary(n)


@given(st.integers(0, 10 ** 6), st.randoms(use_true_random=False))
@settings(max_examples=25, deadline=None)
def test_f_boundary_grows_from_positively_invariant_sets(seed, rnd):
    """bd_F A is inside bd_F B for A inside B inside N with A positively invariant in N."""
    sys = random_isolated_system(seed)
    f, n = sys.f, sys.n
    cells = sorted(n.cells)
    a = forward_closure(f, n, CubicalSet.closure_of(f.grid, rnd.sample(cells, min(3, len(cells)))))
    b = a | CubicalSet.closure_of(f.grid, rnd.sample(cells, min(5, len(cells))))
    assert (image(f, a) & n) <= a
    assert f_boundary(f, a) <= f_boundary(f, b)


def test_algebra_on_examples(dmap, ex1, ex2):
    for n, _ in (ex1, ex2):
        f2, n2, pairs = suite_pairs(dmap, n)
        out = pair_algebra_checks(f2, n2, pairs)
        assert out["failures"] == [], out["failures"][:3]
        assert all(out["checks"].values())


def test_g_operator_shapes(dmap, ex1):
    n, _ = ex1
    p = construct_weak_index_pair(dmap, n)
    q = CubicalPair(n, example_set(dmap.grid, EXAMPLE1_P2))
    lo = intersect(p, q)
    assert check_pair(dmap, n, lo).weak
    # lo <= p with the same P1, so G applies and squeezes p down to lo
    assert lo.p1 == p.p1
    seq = squeeze_sequence(dmap, n, lo, p)
    assert seq[0] == p and seq[-1] == lo
    for a, b in zip(seq, seq[1:]):
        assert b <= a
        assert (image(dmap, a.p1) & n) <= b.p1 and (image(dmap, a.p2) & n) <= b.p2
    assert len(seq) - 1 <= len(n.cells)
    g = g_operator(dmap, n, lo, p)
    assert lo <= g <= p
    ops = pair_algebra(dmap, n, lo, p)
    assert set(ops) == {"intersection", "mixed_lower", "mixed_upper", "g_operator", "squeeze_sequence"}
    for key in ("mixed_lower", "mixed_upper"):
        assert check_pair(dmap, n, ops[key]).weak


def test_g_operator_preconditions(dmap, ex1):
    n, s = ex1
    p = construct_weak_index_pair(dmap, n)
    with pytest.raises(PreconditionViolated):
        g_operator(dmap, n, CubicalPair(n, n), p)
    small = CubicalPair(p.p1, p.p1)
    big = CubicalPair(n, CubicalSet.empty(dmap.grid))
    odd = CubicalPair(example_set(dmap.grid, "[61/64, 3/64]"), example_set(dmap.grid, "{61/64}"))
    with pytest.raises(ShapeMismatch):
        g_operator(dmap, n, odd, CubicalPair(n, example_set(dmap.grid, "[15/16, 61/64] u [3/64, 1/16]")))
    with pytest.raises(NotWeakPair):
        pair_algebra(dmap, n, big, small)


def test_mixed_pairs_are_pairs(dmap, ex1):
    n, _ = ex1
    p = construct_weak_index_pair(dmap, n)
    q = CubicalPair(n, example_set(dmap.grid, EXAMPLE1_P2))
    lo = intersect(p, q)
    for m in (mixed_lower(lo, q), mixed_upper(lo, q)):
        assert check_pair(dmap, n, m).weak


# -- T(P) ---------------------------------------------------------------------

def test_make_t(dmap, ex1, ex2):
    for n, _ in (ex1, ex2):
        p = construct_weak_index_pair(dmap, n)
        t = make_t(p, n, dmap)
        assert t.pair.open_difference == p.open_difference
        assert image(dmap, p.p1) <= t.t1 and image(dmap, p.p2) <= t.t2
        assert n <= t.window
        # T picks up everything of the window outside int N
        assert not (t.window.cells - interior(n)) - t.t2.cells


def test_make_t_strict_needs_b_prime(dmap, ex2):
    n, _ = ex2
    p = construct_weak_index_pair(dmap, n)
    with pytest.raises(PairError):
        make_t_strict(p, dmap)
    f = contracting_map()
    nc = example_set(f.grid, CONTRACTING_N)
    t = make_t_strict(construct_weak_index_pair(f, nc), f)
    assert t.t1.cells - t.t2.cells == construct_weak_index_pair(f, nc).open_difference


# -- exhaustive search ------------------------------------------------------

def test_no_strict_pair_in_example2(dmap, ex2):
    n, _ = ex2
    res = search_index_pairs(dmap, n, first=False)
    assert res.found is None and res.examined > 0 and res.weak_examined >= 1
    assert res.witness["image_of_inv"] == "[3/32, 29/32]"
    assert res.witness["contained_in_n"] is False
    assert find_strict_pair(dmap, n) is None


def test_strict_pair_found_when_it_exists():
    f = contracting_map()
    n = example_set(f.grid, CONTRACTING_N)
    p = find_strict_pair(f, n)
    assert p is not None and check_pair(f, n, p).strict


def test_search_cap(dmap):
    n = example_set(dmap.grid, "[7/8, 1/8]")
    with pytest.raises(SearchTooLarge):
        search_index_pairs(dmap, n, cap=4)


def test_constructed_and_hand_made_pairs_combine(dmap, ex1):
    n, _ = ex1
    p = construct_weak_index_pair(dmap, n)
    q = CubicalPair(n, example_set(dmap.grid, EXAMPLE1_P2))
    out = pair_algebra_checks(dmap, n, [p, q])
    assert not out["failures"] and all(out["checks"].values())
