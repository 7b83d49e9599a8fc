"""End-to-end acceptance checks; the summary prints one line per criterion."""

import json
import shutil
import time
from fractions import Fraction
from pathlib import Path

import pytest

import weakconley.conley as conley
from weakconley.audits import audit_dmds, audit_excision, f_boundary_on_bd, pair_algebra_checks, suite_pairs
from weakconley.cli import main
from weakconley.conley import ExcisionFailure, analyze, audit_independence, audit_strong_consistency
from weakconley.dynamics import invariant_parts, oracle_invariant
from weakconley.fixtures import (
    CONTRACTING_N,
    EXAMPLE1_P2,
    contracting_map,
    contracting_samples,
    example_set,
)
from weakconley.grid import GridSpec, boundary, collar
from weakconley.homology import GradedMap
from weakconley.isolation import check_isolation, f_boundary
from weakconley.pairs import CubicalPair, check_pair, construct_weak_index_pair, search_index_pairs
from weakconley.random_systems import random_isolated_system, random_system
from weakconley.sampling import mv_map_from_samples, read_samples

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

CRITERIA = {
    1: "example 1 golden run: H1 dim 1, λ - 1, under 5 s",
    2: "example 2 golden run: H1 dim 2, swap matrix, λ^2 - 1, under 10 s",
    3: "isolation dichotomy with exact dyadic witnesses",
    4: "no index pair in example 2, weak pair constructed, witness reported",
    5: "invariant part equals the oracle on fixtures and 200 random systems",
    6: "pair algebra suite on 50 random systems",
    7: "independence: >= 4 (N, P) combinations per fixture agree",
    8: "strong consistency on the contracting fixture",
    9: "dmds axioms on every sampled map, 100 trials each",
    10: "excision invertible everywhere; failures abort",
}


def fixtures():
    """(name, map, neighbourhood) for every fixture, rebuilt from the sample files."""
    g1 = json.loads((CONFIGS / "example1.json").read_text())
    grid = GridSpec.from_json(g1["grid"])
    f = mv_map_from_samples(read_samples(CONFIGS / "doubling.csv", grid=grid), grid)
    c = contracting_map()
    return [
        ("example1", f, example_set(grid, "[15/16, 1/16]")),
        ("example2", f, example_set(grid, "[17/64, 27/64] u [37/64, 47/64]")),
        ("contracting", c, example_set(c.grid, CONTRACTING_N)),
    ]


def golden(tmp_path, literal):
    shutil.copy(CONFIGS / "doubling.csv", tmp_path / "doubling.csv")
    cfg = json.loads((CONFIGS / "example1.json").read_text())
    cfg.pop("figure")
    cfg["report"] = "r.json"
    cfg["neighbourhoods"] = [{"name": "N", "set": literal}]
    (tmp_path / "c.json").write_text(json.dumps(cfg))
    t0 = time.perf_counter()
    code = main(["analyze", "--config", str(tmp_path / "c.json")])
    elapsed = time.perf_counter() - t0
    rep = json.loads((tmp_path / "r.json").read_text())
    return code, rep["neighbourhoods"][0]["conley_index"]["degrees"], elapsed


def test_criterion_1_example1_golden(tmp_path):
    code, deg, elapsed = golden(tmp_path, "[15/16, 1/16]")
    assert code == 0
    assert deg["1"]["dim"] == 1 and deg["1"]["charpoly"] == "λ - 1"
    assert all(v["dim"] == 0 for d, v in deg.items() if d != "1")
    assert elapsed < 5


def test_criterion_2_example2_golden(tmp_path):
    code, deg, elapsed = golden(tmp_path, "[17/64, 27/64] u [37/64, 47/64]")
    assert code == 0
    assert deg["1"]["dim"] == 2 and deg["1"]["charpoly"] == "λ^2 - 1"
    # eigenvalues 1 and -1 are distinct, so any such matrix is conjugate to the swap;
    # check it squares to the identity without being +-1
    m = [[Fraction(x) for x in r] for r in deg["1"]["matrix"]]
    sq = [[sum(m[i][k] * m[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert sq == [[1, 0], [0, 1]] and m[0][0] + m[1][1] == 0
    assert all(v["dim"] == 0 for d, v in deg.items() if d != "1")
    assert elapsed < 10


def test_criterion_3_isolation_dichotomy(dmap, ex1, ex2):
    v1 = check_isolation(dmap, ex1[0])
    assert v1.weak and not v1.strong_metric
    assert v1.witnesses["metric"] == {"distance": "1/32", "max_diameter": "3/16"}
    m = v1.witnesses["metric"]
    assert Fraction(m["distance"]) <= Fraction(m["max_diameter"])
    v2 = check_isolation(dmap, ex2[0])
    assert v2.weak and not v2.strong_setwise
    assert v2.witnesses["image_of_inv"] == "[3/32, 29/32]"
    assert v2.witnesses["escaping"] == "[3/32, 17/64] u [27/64, 37/64] u [47/64, 29/32]"


def test_criterion_4_no_index_pair_in_example2(dmap, ex2):
    n, _ = ex2
    res = search_index_pairs(dmap, n, first=False)
    assert res.found is None and res.examined > 0
    assert res.witness == {"image_of_inv": "[3/32, 29/32]", "n": "[17/64, 27/64] u [37/64, 47/64]",
                           "contained_in_n": False}
    p = construct_weak_index_pair(dmap, n)
    rep = check_pair(dmap, n, p)
    assert rep.weak and not rep.b_prime


@pytest.mark.slow
def test_criterion_5_invariant_oracle():
    for _, f, n in fixtures():
        assert invariant_parts(f, n).inv.cells == oracle_invariant(f, n).cells
    dims = set()
    for seed in range(200):
        sys = random_system(seed)
        dims.add(sys.f.grid.dimension)
        assert len(sys.n.top_cells()) <= 40
        assert invariant_parts(sys.f, sys.n).inv.cells == oracle_invariant(sys.f, sys.n).cells, seed
    assert dims == {1, 2}


@pytest.mark.slow
def test_criterion_6_pair_algebra():
    for i in range(50):
        sys = random_isolated_system(6000 + i, dim=2 if i % 10 == 9 else 1)
        f, n, pairs = suite_pairs(sys.f, sys.n)
        for p in pairs:
            assert f_boundary_on_bd(f, n, p)
            assert f_boundary(f, p.p1) <= boundary(n)
        out = pair_algebra_checks(f, n, pairs)
        assert out["failures"] == [], (sys.seed, out["failures"][:3])
        assert all(out["checks"].values()), (sys.seed, out["checks"])


def test_criterion_7_independence(dmap, ex1, ex2):
    for n, s in (ex1, ex2):
        extra = []
        if n == ex1[0]:
            extra = [(n, CubicalPair(n, example_set(dmap.grid, EXAMPLE1_P2)))]
        res = audit_independence(dmap, [n, collar(n, 1)], inv_spec=s, extra_pairs=extra)
        assert res.passed, res.details
        assert res.details["distinct_combinations"] >= 4


def test_criterion_8_strong_consistency():
    f = contracting_map()
    n = example_set(f.grid, CONTRACTING_N)
    assert check_isolation(f, n).strong_setwise
    res = audit_strong_consistency(f, n)
    assert res.passed
    assert res.details["strict_index"] == res.details["weak_index"]
    deg = res.details["weak_index"]
    assert deg["0"]["dim"] == 1 and deg["0"]["charpoly"] == "λ - 1"
    assert all(v["dim"] == 0 for d, v in deg.items() if d != "0")


def test_criterion_9_dmds_axioms():
    maps = [f for _, f, _ in fixtures()[1:]]  # examples 1 and 2 share one map
    maps.append(mv_map_from_samples(contracting_samples(), contracting_map().grid))
    for seed in range(10):
        maps.append(random_system(seed).f)
    for i, f in enumerate(maps):
        res = audit_dmds(f, 100, seed=i)
        assert res.passed, res.details
        assert res.details["inverse_symmetry"] and not res.details["vacuous"]


def test_criterion_10_excision(monkeypatch):
    for _, f, n in fixtures():
        assert audit_excision(f, n).passed
    for seed in range(20):
        sys = random_isolated_system(seed, dim=2 if seed % 5 == 4 else 1)
        res = audit_excision(sys.f, sys.n)
        assert res.passed, (seed, res.details)

    # a singular inclusion must abort the run instead of producing an index
    real = conley.inclusion_induced

    def broken(a, b):
        g = real(a, b)
        mats = {d: [[0 * x for x in r] for r in m] for d, m in g.matrices.items()}
        return GradedMap(g.field, mats, g.shapes)

    monkeypatch.setattr(conley, "inclusion_induced", broken)
    _, f, n = fixtures()[0]
    with pytest.raises(ExcisionFailure):
        analyze(f, n)
    assert not audit_excision(f, n).passed
