"""Hashing on supersingular 2-isogeny graphs with exact distribution analysis."""

from .cgl import (
    HashState,
    WalkAutomaton,
    bits_from_bytes,
    compile_walk,
    hash_bits,
    hash_bytes,
    init_state,
    step,
)
from .conventions import WALK_CONVENTION, convention_tag
from .curve import (
    Curve,
    Point,
    curve_from_j,
    find_initial_curve,
    is_supersingular,
    j_invariant,
    supersingular_count,
)
from .errors import (
    AmbiguousStationaryError,
    GraphIntegrityError,
    InvalidCurveError,
    KernelError,
    RationalityError,
)
from .field import FieldContext, FieldElement, canonical_compare, cubic_roots, make_field_context
from .graph import IsogenyGraph, build_graph, dual_pair_census, export_graph
from .isogeny import Isogeny2, velu2, verify_two_map
from .markov import (
    Distribution,
    PairMatrix,
    build_pair_matrix,
    closed_form_collision,
    collision_probability,
    empirical_distribution,
    ideal_collision,
    ideal_deviation,
    nearest_prime_in_class,
    node_marginals,
    stationary_distribution,
    theoretical_node_distribution,
    theoretical_pair_distribution,
    to_sigfigs,
    verify_pair_aggregation,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousStationaryError",
    "Curve",
    "Distribution",
    "FieldContext",
    "FieldElement",
    "GraphIntegrityError",
    "HashState",
    "InvalidCurveError",
    "Isogeny2",
    "IsogenyGraph",
    "KernelError",
    "PairMatrix",
    "Point",
    "RationalityError",
    "WALK_CONVENTION",
    "WalkAutomaton",
    "bits_from_bytes",
    "build_graph",
    "build_pair_matrix",
    "canonical_compare",
    "closed_form_collision",
    "collision_probability",
    "compile_walk",
    "convention_tag",
    "cubic_roots",
    "curve_from_j",
    "dual_pair_census",
    "empirical_distribution",
    "export_graph",
    "find_initial_curve",
    "hash_bits",
    "hash_bytes",
    "ideal_collision",
    "ideal_deviation",
    "init_state",
    "is_supersingular",
    "j_invariant",
    "make_field_context",
    "nearest_prime_in_class",
    "node_marginals",
    "stationary_distribution",
    "step",
    "supersingular_count",
    "theoretical_node_distribution",
    "theoretical_pair_distribution",
    "to_sigfigs",
    "velu2",
    "verify_pair_aggregation",
    "__version__",
]
