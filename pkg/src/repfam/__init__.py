"""Weighted representative families over linear and uniform matroids."""

from .ffmat import BIG_FIELD, SMALL_FIELD, PrimeField, PrimeFieldMatrix
from .matroids import (
    LinearMatroid,
    direct_sum,
    graphic_matroid,
    partition_matroid,
    truncate,
    uniform_matroid,
)
from .repfam import WeightedSetFamily, family_product, family_union, rep_linear, rep_linear_auto
from .sepcol import UniformReducer, build, rep_uniform, rep_uniform_naive

__version__ = "0.1.0"

__all__ = [
    "PrimeField", "PrimeFieldMatrix", "SMALL_FIELD", "BIG_FIELD",
    "LinearMatroid", "uniform_matroid", "partition_matroid", "graphic_matroid", "direct_sum", "truncate",
    "WeightedSetFamily", "family_product", "family_union", "rep_linear", "rep_linear_auto",
    "build", "rep_uniform", "rep_uniform_naive", "UniformReducer",
]
