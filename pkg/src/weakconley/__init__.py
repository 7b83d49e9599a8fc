"""Conley index of sampled dynamical systems via weak index pairs.

The main entry points::

    from weakconley import doubling_map, parse_set, analyze

    f = doubling_map()
    n = parse_set("[15/16, 1/16]", f.grid)
    print(analyze(f, n).report.to_json()["degrees"])
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .conley import (
    Analysis,
    ConleyIndexReport,
    ExcisionFailure,
    NoStrictPairFound,
    analyze,
    audit_independence,
    audit_strong_consistency,
    index_map,
    leray_reduce,
)
from .dynamics import image, invariant_parts, oracle_invariant, transition_graph
from .fields import Field, parse_coeffs
from .fixtures import contracting_map, doubling_map, doubling_samples
from .grid import Axis, CubicalSet, GridSpec, collar, interior
from .homology import ProjectionNotIso, relative_homology
from .isolation import check_isolation, grow_isolating_neighbourhood
from .literals import format_set, parse_set
from .pairs import (
    CubicalPair,
    NotIsolating,
    PairError,
    check_pair,
    construct_weak_index_pair,
    make_t,
    search_index_pairs,
)
from .sampling import SampleSet, build_combo_map, build_mv_map, read_samples, verify_dmds_axioms

__all__ = [
    "Analysis",
    "Axis",
    "BACKEND",
    "ConleyIndexReport",
    "CubicalPair",
    "CubicalSet",
    "ExcisionFailure",
    "Field",
    "GridSpec",
    "NoStrictPairFound",
    "NotIsolating",
    "PairError",
    "ProjectionNotIso",
    "SampleSet",
    "analyze",
    "audit_independence",
    "audit_strong_consistency",
    "build_combo_map",
    "build_mv_map",
    "check_isolation",
    "check_pair",
    "collar",
    "construct_weak_index_pair",
    "contracting_map",
    "doubling_map",
    "doubling_samples",
    "format_set",
    "grow_isolating_neighbourhood",
    "image",
    "index_map",
    "interior",
    "invariant_parts",
    "leray_reduce",
    "make_t",
    "oracle_invariant",
    "parse_coeffs",
    "parse_set",
    "read_samples",
    "relative_homology",
    "search_index_pairs",
    "transition_graph",
    "verify_dmds_axioms",
]
