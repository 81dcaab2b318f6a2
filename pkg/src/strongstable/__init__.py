"""Strongly stable matchings in bipartite instances with ties."""
from .fixed_edge import build_auxiliary, optimal_with_edge, stable_pairs
from .instance import (
    GenParams,
    Instance,
    Matching,
    ValidationError,
    format_matching,
    generate_random,
    parse_instance,
    parse_matching,
    serialize_instance,
    signature,
)
from .lattice import MatchingClass, dominates, equivalent, join_men, meet_men, sym_diff_cycles
from .maxseq import MaximalSequence, has_intermediate, maximal_sequence, strict_successor
from .oracle import CapExceeded, oracle_enumerate
from .representation import (
    class_of_closed_set,
    closure,
    enumerate_classes,
    expand_class,
    irreducible_classes,
    support,
)
from .rotations import Rotation, RotationPoset, applied, extract_rotations, rotation_poset
from .solver import NoSolution, blocking_edges, is_strongly_stable, man_optimal, woman_optimal

__all__ = [
    "GenParams", "Instance", "Matching", "ValidationError", "format_matching",
    "generate_random", "parse_instance", "parse_matching", "serialize_instance",
    "signature", "NoSolution", "blocking_edges", "is_strongly_stable", "man_optimal",
    "woman_optimal", "MatchingClass", "dominates", "equivalent", "join_men", "meet_men",
    "sym_diff_cycles", "build_auxiliary", "optimal_with_edge", "stable_pairs",
    "irreducible_classes", "support", "closure", "class_of_closed_set",
    "enumerate_classes", "expand_class", "MaximalSequence", "maximal_sequence",
    "strict_successor", "has_intermediate", "Rotation", "RotationPoset",
    "extract_rotations", "rotation_poset", "applied", "CapExceeded", "oracle_enumerate",
]
