"""Shared result type, errors and reducer plumbing for the solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from ..ffmat import SMALL_FIELD
from ..matroids import uniform_matroid
from ..repfam import rep_linear
from ..sepcol import UniformReducer


class InputError(ValueError):
    """The instance violates a solver precondition."""


@dataclass
class SolverResult:
    found: bool
    witness: Any = None
    weight: int | None = None
    provenance: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.found


_REDUCERS: dict[tuple, UniformReducer] = {}


def get_reducer(seed: int = 0, P_conf: int = 40, pipeline: str = "default",
                reducer: UniformReducer | None = None) -> UniformReducer:
    """Shared reducer per (seed, P_conf, pipeline) so collections are built once."""
    if reducer is not None:
        return reducer
    key = (int(seed), int(P_conf), pipeline)
    r = _REDUCERS.get(key)
    if r is None:
        r = _REDUCERS[key] = UniformReducer(seed=int(seed), P_conf=int(P_conf), pipeline=pipeline)
    return r


def reducer_provenance(r: UniformReducer, used: set) -> dict:
    """Provenance restricted to the collections one solver call touched."""
    cols = [r._cache[k] for k in sorted(used) if k in r._cache]
    return {
        "seed": r.seed,
        "P_conf": r.P_conf,
        "pipeline": r.pipeline,
        "collections": len(cols),
        "monte_carlo": not all(bool(C.provenance.get("verified")) for C in cols),
    }


class LinearUniformReducer:
    """Deterministic alternative: rep_linear over a Vandermonde U_{n,p+q}.

    Output families never exceed C(p+q, p), which keeps the path DP small on
    large graphs where Monte Carlo separating collections are huge.
    """

    def __init__(self):
        self._cache: dict = {}

    def reduce(self, S, q: int, sense: str | None = None):
        n, p = len(S.universe), S.set_size or 0
        q = max(0, min(q, n - p))
        if len(S) <= math.comb(p + q, p):
            return S
        M = self._cache.get((n, p + q))
        if M is None:
            M = self._cache[(n, p + q)] = uniform_matroid(n, p + q, SMALL_FIELD)
        return rep_linear(M, S, q, sense)

    def provenance_for(self, used: set) -> dict:
        return {"reducer": "linear", "collections": 0, "monte_carlo": False}


class TrackingReducer:
    """Wraps a UniformReducer and remembers which (n, p, q) keys were used."""

    def __init__(self, base: UniformReducer):
        self.base = base
        self.used: set = set()

    def reduce(self, S, q: int, sense: str | None = None):
        n, p = len(S.universe), S.set_size or 0
        q = max(0, min(q, n - p))
        if len(S):
            self.used.add((n, p, q))
        return self.base.reduce(S, q, sense)

    def provenance(self) -> dict:
        if hasattr(self.base, "provenance_for"):
            return self.base.provenance_for(self.used)
        return reducer_provenance(self.base, self.used)
