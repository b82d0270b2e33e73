"""Finite simplicial sets and higher groupoids, Kan replacement, and A-path numerics."""

from .groupoids import FiniteGroupoid, LocalGroupoid, bigon_groupoid, local_nerve, nerve
from .homotopy import HomotopyGroup, find_isomorphism, homotopy_group
from .kan import FilteredSimplicialSet, kan_replace, kan_step, truncate
from .morita import (
    check_hypercover,
    check_morita_lemma_conditions,
    extract_local_groupoid,
    pullback_2groupoid,
    vertex_cover,
)
from .simplicial import (
    FiniteSimplicialSet,
    KanError,
    SimplicialError,
    SimplicialMap,
    boundary,
    classify_n_groupoid,
    horn,
    standard_simplex,
)

__version__ = "0.1.0"

__all__ = [
    "FiniteGroupoid",
    "FiniteSimplicialSet",
    "FilteredSimplicialSet",
    "HomotopyGroup",
    "KanError",
    "LocalGroupoid",
    "SimplicialError",
    "SimplicialMap",
    "bigon_groupoid",
    "boundary",
    "check_hypercover",
    "check_morita_lemma_conditions",
    "classify_n_groupoid",
    "extract_local_groupoid",
    "find_isomorphism",
    "homotopy_group",
    "horn",
    "kan_replace",
    "kan_step",
    "local_nerve",
    "nerve",
    "pullback_2groupoid",
    "standard_simplex",
    "truncate",
    "vertex_cover",
]
