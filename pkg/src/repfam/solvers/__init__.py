"""Exact graph solvers built on representative families."""

from .common import InputError, LinearUniformReducer, SolverResult
from .ktree import k_tree
from .paths import PathFamilyTable, k_path, long_directed_cycle, path_families, short_cheap_tour
from .scss import meg, min_scss
from .steiner import steiner_tree
from .validate import (
    WitnessError,
    validate_cycle,
    validate_embedding,
    validate_equivalent,
    validate_path,
    validate_steiner,
    validate_strong,
)

__all__ = [
    "InputError", "SolverResult", "LinearUniformReducer", "PathFamilyTable", "WitnessError",
    "path_families", "k_path", "short_cheap_tour", "long_directed_cycle",
    "steiner_tree", "min_scss", "meg", "k_tree",
    "validate_path", "validate_cycle", "validate_steiner", "validate_strong",
    "validate_equivalent", "validate_embedding",
]
