"""Interchange near rings on finite groups.

A product ``x • y = ε(x) + η(y)`` built from an image-commuting pair of
endomorphisms satisfies the interchange law with the group addition, and every
such product arises this way.  The package enumerates these products, sorts
them into isomorphism classes through similarity of pairs, and counts the
associative ones on abelian groups through canonical diagonal forms.
"""

from .canonical import (
    CanonicalTriple,
    canonical_form,
    canonicalize_pair,
    count_formula,
    diagonalize_pair,
    enumerate_canonical_pairs,
    verify_count,
)
from .classify import FILTERS, census_by_order, classify
from .endo import (
    EndoPair,
    Endomorphism,
    are_similar,
    conjugate,
    conjugate_pair,
    endomorphism_classes,
    endomorphism_table,
    enumerate_automorphisms,
    enumerate_endomorphisms,
    parse_pair,
)
from .errors import (
    CapExceededError,
    CrossValidationError,
    InterchangeError,
    NotAbelianError,
    NotImageCommutingError,
    SpecParseError,
)
from .groups import FiniteGroup, make_abelian_group, make_group_from_table, parse_group_spec, ppc_decompose, ppc_rank
from .interchange import (
    EssentialTag,
    InterchangeNearRing,
    MagmaProps,
    are_isomorphic,
    build_from_pair,
    check_basic_identities,
    extract_pair,
    find_isomorphism,
    magma_props,
)
from .structures import ideals, is_ideal, is_subring, matrix_ring, maximal_ideals, quotient

__all__ = [
    "CanonicalTriple",
    "CapExceededError",
    "CrossValidationError",
    "EndoPair",
    "Endomorphism",
    "EssentialTag",
    "FILTERS",
    "FiniteGroup",
    "InterchangeError",
    "InterchangeNearRing",
    "MagmaProps",
    "NotAbelianError",
    "NotImageCommutingError",
    "SpecParseError",
    "are_isomorphic",
    "are_similar",
    "build_from_pair",
    "canonical_form",
    "canonicalize_pair",
    "census_by_order",
    "check_basic_identities",
    "classify",
    "conjugate",
    "conjugate_pair",
    "count_formula",
    "diagonalize_pair",
    "endomorphism_classes",
    "endomorphism_table",
    "enumerate_automorphisms",
    "enumerate_canonical_pairs",
    "enumerate_endomorphisms",
    "extract_pair",
    "find_isomorphism",
    "ideals",
    "is_ideal",
    "is_subring",
    "magma_props",
    "make_abelian_group",
    "make_group_from_table",
    "matrix_ring",
    "maximal_ideals",
    "parse_group_spec",
    "parse_pair",
    "ppc_decompose",
    "ppc_rank",
    "quotient",
    "verify_count",
]
