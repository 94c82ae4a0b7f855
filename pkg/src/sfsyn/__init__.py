"""Syntactic complexity toolkit for suffix-free regular languages."""

from .transform import (
    Transformation,
    compose,
    power,
    identity,
    parse_transformation,
    format_transformation,
    classify_shape,
    orbits,
    zero_path,
)
from .semigroup import (
    TransitionSemigroup,
    closure,
    in_bsf,
    in_vsf,
    in_wsf,
    enumerate_bsf,
    enumerate_wsf,
    vsf_generators,
    wsf_bound,
    semiconstant_family,
    witness_letters,
    is_irreducibly_generated,
)
from .dfa import (
    Dfa,
    witness,
    transition_semigroup,
    minimize,
    is_minimal,
    is_suffix_free,
    suffix_free_violation,
    empty_state,
    check_zero_path_structure,
    format_dfa,
    parse_dfa,
    to_dot,
)
from .collisions import (
    PairStatus,
    colliding_pairs_of,
    focused_pairs_of,
    pair_statuses,
    verify_suffix_free_consistency,
    check_collision_free_bound,
)
from .injection import (
    PhiContext,
    PhiOutcome,
    classify,
    phi,
    phi_inverse,
    verify_injective,
    strict_bound_witness,
)
from .search import (
    SearchResult,
    canonicalize,
    allowed_additions,
    search_max,
)

__all__ = [
    "Transformation",
    "compose",
    "power",
    "identity",
    "parse_transformation",
    "format_transformation",
    "classify_shape",
    "orbits",
    "zero_path",
    "TransitionSemigroup",
    "closure",
    "in_bsf",
    "in_vsf",
    "in_wsf",
    "enumerate_bsf",
    "enumerate_wsf",
    "vsf_generators",
    "wsf_bound",
    "semiconstant_family",
    "witness_letters",
    "is_irreducibly_generated",
    "Dfa",
    "witness",
    "transition_semigroup",
    "minimize",
    "is_minimal",
    "is_suffix_free",
    "suffix_free_violation",
    "empty_state",
    "check_zero_path_structure",
    "format_dfa",
    "parse_dfa",
    "to_dot",
    "PairStatus",
    "colliding_pairs_of",
    "focused_pairs_of",
    "pair_statuses",
    "verify_suffix_free_consistency",
    "check_collision_free_bound",
    "PhiContext",
    "PhiOutcome",
    "classify",
    "phi",
    "phi_inverse",
    "verify_injective",
    "strict_bound_witness",
    "SearchResult",
    "canonicalize",
    "allowed_additions",
    "search_max",
]

__version__ = "0.1.0"
