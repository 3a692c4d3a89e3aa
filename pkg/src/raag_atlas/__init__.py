"""Decorated-digraph classification and pro-p group verification tools.

The package models finite digraphs whose edges are ordinary (bidirected)
or special (one-way, into a distinguished head), classifies them as
special and elementary-type with certificates, emits the attached pro-p
presentations, and exactly verifies the supporting group-theoretic
computations with truncated p-adic arithmetic, explicit coordinate
models, and exhaustive unitriangular lift searches.
"""

from .digraph import (
    ORDINARY,
    Digraph,
    SpecialToward,
    are_isomorphic,
    cone,
    disjoint_union,
    enumerate_digraphs,
    equal_as_labeled,
    induced,
    induced_with_status,
)
from .classify import (
    ForbiddenWitness,
    classify,
    forbidden_triples,
    is_elementary_type_decomp,
    is_elementary_type_forbidden,
    is_special,
    replay,
)
from .census import census
from .padic import PUnit, TruncatedPAdic, check_claims, solve_exponent
from .presentation import GroupWord, Presentation, character_space, orientation, present

__version__ = "0.1.0"

__all__ = [
    "ORDINARY",
    "Digraph",
    "SpecialToward",
    "GroupWord",
    "Presentation",
    "PUnit",
    "TruncatedPAdic",
    "ForbiddenWitness",
    "are_isomorphic",
    "census",
    "character_space",
    "check_claims",
    "classify",
    "cone",
    "disjoint_union",
    "enumerate_digraphs",
    "equal_as_labeled",
    "forbidden_triples",
    "induced",
    "induced_with_status",
    "is_elementary_type_decomp",
    "is_elementary_type_forbidden",
    "is_special",
    "orientation",
    "present",
    "replay",
    "solve_exponent",
]
