import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakconley.conley import (
    NoStrictPairFound,
    analyze,
    audit_independence,
    audit_strong_consistency,
    index_map,
    reduce_endomorphism,
)
from weakconley.fields import Field, NotAField, SingularMatrix, charpoly, inverse, matmul
from weakconley.fixtures import CONTRACTING_N, contracting_map, example_set
from weakconley.grid import collar
from weakconley.pairs import construct_weak_index_pair
from weakconley.random_systems import random_isolated_system

FIELDS = (Field(), Field(2), Field(3), Field(5))


def lift(a, k):
    return [[k(x) for x in r] for r in a]


def key(a, k):
    d = reduce_endomorphism(lift(a, k), k)
    return d.dim, d.charpoly


def test_reduction_examples():
    k = Field()
    assert key([[0, 1], [0, 0]], k) == (0, [1])  # nilpotent: trivial index
    assert key([[1, 0], [0, 1]], k) == (2, [1, -2, 1])
    assert key([[2]], k) == (1, [-2, 1])
    assert key([[1, 1], [0, 0]], k) == (1, [-1, 1])
    assert key([[0, 1], [1, 0]], k) == (2, [-1, 0, 1])
    assert key([], k) == (0, [1])


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n))


@given(matrices, st.sampled_from(FIELDS))
@settings(max_examples=100, deadline=None)
def test_reduction_splits_off_the_nilpotent_part(a, k):
    """charpoly(A) = x^(n - d) * charpoly(A restricted to its eventual image)."""
    m = lift(a, k)
    r = reduce_endomorphism(m, k)
    full = charpoly(m, k)
    n = len(a)
    shifted = [k(0)] * (n - r.dim) + list(r.charpoly)
    assert full == shifted
    assert r.charpoly[0] != 0  # an automorphism
    if r.dim:
        inverse(r.matrix, k)


@given(matrices, st.integers(0, 10 ** 6), st.sampled_from(FIELDS))
@settings(max_examples=100, deadline=None)
def test_reduction_is_conjugacy_invariant(a, seed, k):
    n = len(a)
    rng = random.Random(seed)
    for _ in range(20):
        b = [[k(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        try:
            bi = inverse(b, k)
        except SingularMatrix:
            continue
        c = matmul(matmul(b, lift(a, k), k), bi, k)
        assert key(c, k) == key(a, k)
        return


def test_examples_are_basis_independent(dmap, ex1, ex2):
    for (n, _), want in ((ex1, (1, [-1, 1])), (ex2, (2, [-1, 0, 1]))):
        for seed in range(4):
            a = analyze(dmap, n, rng=random.Random(seed))
            d1 = a.report.degrees[1]
            assert (d1.dim, d1.charpoly) == want
            assert a.report.degrees[0].dim == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_fields_agree_with_rationals(dmap, ex1, ex2, p):
    k = Field(p)
    for n, _ in (ex1, ex2):
        q = analyze(dmap, n).report
        z = analyze(dmap, n, k).report
        for d, v in q.degrees.items():
            w = z.degrees[d]
            if p == 2 and v.dim == 2:
                # over Z/2 the swap has charpoly x^2 + 1 = (x + 1)^2, still invertible
                assert w.dim == 2 and w.charpoly == [1, 0, 1]
                continue
            assert w.dim == v.dim
            assert w.charpoly == [k(c) for c in v.charpoly]


def test_integer_coefficients_are_refused(dmap, ex1):
    n, _ = ex1
    with pytest.raises(NotAField):
        analyze(dmap, n, "z")
    p = construct_weak_index_pair(dmap, n)
    with pytest.raises(NotAField):
        index_map(dmap, n, p, "z")


@given(st.integers(0, 10 ** 6))
@settings(max_examples=12, deadline=None)
def test_wazewski_property(seed):
    """A nontrivial index forces a nonempty invariant set."""
    sys = random_isolated_system(seed, nonempty=seed % 2 == 0)
    a = analyze(sys.f, sys.n)
    if not a.verdict.inv:
        assert a.report.is_trivial()
    if not a.report.is_trivial():
        assert a.verdict.inv
    assert a.bundle.excision_map.is_iso()


def test_independence_on_example1(dmap, ex1):
    n, s = ex1
    res = audit_independence(dmap, [n, collar(n, 1)], inv_spec=s)
    assert res.passed
    assert res.details["distinct_combinations"] >= 4
    assert res.details["same_invariant_set"]


def test_strong_consistency():
    f = contracting_map()
    n = example_set(f.grid, CONTRACTING_N)
    res = audit_strong_consistency(f, n)
    assert res.passed
    assert res.details["strict_index"] == res.details["weak_index"]
    assert res.details["weak_index"]["0"]["charpoly"] == "λ - 1"


def test_strong_consistency_without_strict_pair(dmap, ex2):
    n, _ = ex2
    with pytest.raises(NoStrictPairFound) as info:
        audit_strong_consistency(dmap, n)
    assert info.value.witness["witness"]["image_of_inv"] == "[3/32, 29/32]"
