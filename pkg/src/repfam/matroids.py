"""Linear matroids: uniform, partition, graphic, direct sums, truncation."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .ffmat import (
    BIG_FIELD,
    PrimeField,
    PrimeFieldMatrix,
    echelon,
    matmul,
    rank_of_columns,
)

# largest number of t-subsets we are willing to check after truncation
TRUNCATION_VERIFY_BUDGET = 20000


class MatroidError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LinearMatroid:
    """Column matroid of ``matrix``; ``ground[j]`` labels column j.

    The matrix always has full row rank, so ``rank == matrix.rows``.
    """

    matrix: PrimeFieldMatrix
    ground: tuple
    info: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(self.ground) != self.matrix.cols:
            raise MatroidError("one label per column required")
        if len(set(self.ground)) != len(self.ground):
            raise MatroidError("labels must be unique")
        object.__setattr__(self, "_index", {g: j for j, g in enumerate(self.ground)})

    @property
    def field(self) -> PrimeField:
        return self.matrix.field

    @property
    def rank(self) -> int:
        return self.matrix.rows

    def __len__(self):
        return len(self.ground)

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise MatroidError(f"unknown element {label!r}") from None

    def columns(self, labels: Iterable) -> list[int]:
        return [self.index(x) for x in labels]

    def is_independent(self, S: Iterable) -> bool:
        cols = self.columns(S)
        if len(set(cols)) != len(cols):
            raise MatroidError("repeated element")
        if len(cols) > self.rank:
            return False
        return rank_of_columns(self.matrix, cols) == len(cols)


def _normalized(a: np.ndarray, field: PrimeField) -> PrimeFieldMatrix:
    """Drop dependent rows; a full-row-rank input is returned unchanged."""
    if a.shape[0] == 0:
        return PrimeFieldMatrix._wrap(field.zeros((0, a.shape[1])), field)
    _, piv = echelon(a.T, field.modulus)
    if len(piv) == a.shape[0]:
        return PrimeFieldMatrix._wrap(np.array(a), field)
    r, piv = echelon(a, field.modulus, reduced=True)
    return PrimeFieldMatrix._wrap(np.array(r[: len(piv)]), field)


def from_matrix(entries, labels: Sequence | None = None, field: PrimeField | None = None) -> LinearMatroid:
    field = field or BIG_FIELD
    m = entries if isinstance(entries, PrimeFieldMatrix) else PrimeFieldMatrix(entries, field)
    labels = tuple(range(m.cols)) if labels is None else tuple(labels)
    return LinearMatroid(_normalized(m.array, m.field), labels)


def uniform_matroid(n: int, k: int, field: PrimeField | None = None, labels: Sequence | None = None) -> LinearMatroid:
    """U_{n,k} as the k x n Vandermonde matrix with nodes 1..n."""
    field = field or BIG_FIELD
    if not 0 <= k <= n:
        raise MatroidError(f"need 0 <= k <= n, got k={k}, n={n}")
    if field.modulus <= n:
        raise MatroidError(f"field modulus {field.modulus} must exceed n={n}")
    P = field.modulus
    a = field.zeros((k, n))
    for j in range(n):
        x = 1
        for i in range(k):
            a[i, j] = x
            x = x * (j + 1) % P
    labels = tuple(range(n)) if labels is None else tuple(labels)
    return LinearMatroid(PrimeFieldMatrix._wrap(a, field), labels, {"kind": "uniform", "n": n, "k": k})


def direct_sum(parts: Sequence[LinearMatroid]) -> LinearMatroid:
    parts = list(parts)
    if not parts:
        raise MatroidError("direct sum of nothing")
    field = parts[0].field
    if any(p.field != field for p in parts):
        raise MatroidError("field mismatch in direct sum")
    labels = [x for p in parts for x in p.ground]
    if len(set(labels)) != len(labels):
        raise MatroidError("ground sets of a direct sum must be disjoint")
    a = field.zeros((sum(p.rank for p in parts), len(labels)))
    r = c = 0
    for p in parts:
        a[r:r + p.rank, c:c + len(p)] = p.matrix.array
        r += p.rank
        c += len(p)
    return LinearMatroid(PrimeFieldMatrix._wrap(a, field), tuple(labels), {"kind": "direct_sum"})


def partition_matroid(blocks: Sequence[Iterable], caps: Sequence[int], field: PrimeField | None = None) -> LinearMatroid:
    blocks = [list(b) for b in blocks]
    if len(blocks) != len(caps):
        raise MatroidError("one cap per block required")
    seen = set()
    for b in blocks:
        for x in b:
            if x in seen:
                raise MatroidError(f"element {x!r} appears in two blocks")
            seen.add(x)
    parts = []
    for b, c in zip(blocks, caps):
        if not 0 <= c <= len(b):
            raise MatroidError(f"cap {c} outside [0, {len(b)}]")
        parts.append(uniform_matroid(len(b), c, field, labels=b))
    M = direct_sum(parts)
    M.info.update(kind="partition")
    return M


def _edge_list(G) -> tuple[int, list[tuple[int, int]]]:
    if hasattr(G, "edges") and hasattr(G, "n"):
        return G.n, list(G.edges())
    n, edges = G
    return n, [tuple(e) for e in edges]


def graphic_matroid(G, labels: Sequence | None = None, field: PrimeField | None = None) -> LinearMatroid:
    """Graphic matroid of a (multi)graph given as a Graph or as ``(n, edges)``.

    Column j is the signed incidence vector of edge j: +1 at the smaller
    endpoint, -1 at the other. Parallel edges are allowed, loops are not.
    """
    field = field or BIG_FIELD
    n, edges = _edge_list(G)
    P = field.modulus
    a = field.zeros((n, len(edges)))
    for j, (u, v) in enumerate(edges):
        if u == v:
            raise MatroidError(f"loop at vertex {u}")
        lo, hi = min(u, v), max(u, v)
        a[lo, j] = 1
        a[hi, j] = P - 1
    labels = tuple(range(len(edges))) if labels is None else tuple(labels)
    r, piv = echelon(a, P, reduced=True)
    m = PrimeFieldMatrix._wrap(np.array(r[: len(piv)]), field)
    return LinearMatroid(m, labels, {"kind": "graphic"})


def truncation_failure_bound(n_elements: int, t: int, P: int) -> float:
    """Schwartz-Zippel union bound for a random projection to t rows."""
    return math.comb(n_elements, t) * t / P


def truncate(M: LinearMatroid, t: int, seed: int = 0, P_conf: int = 40,
             verify: bool | None = None, max_attempts: int = 8) -> LinearMatroid:
    """t-truncation via a random t x rank(M) projection over the same field.

    With ``verify`` (default: when cheap) every t-subset that is independent in
    M is checked and the projection is redrawn on failure.
    """
    k = M.rank
    if not 0 <= t <= k:
        raise MatroidError(f"truncation rank {t} outside [0, {k}]")
    field = M.field
    P = field.modulus
    N = len(M)
    bound = truncation_failure_bound(N, t, P)
    if verify is None:
        verify = math.comb(N, t) <= TRUNCATION_VERIFY_BUDGET
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, t, N, k])
    for attempt in range(max_attempts):
        rng = np.random.default_rng(ss.spawn(1)[0])
        L = field.asarray(rng.integers(0, P, size=(t, k), dtype=np.int64))
        a = matmul(L, M.matrix.array, P)
        cand = LinearMatroid(PrimeFieldMatrix._wrap(np.array(a), field), M.ground,
                             {"kind": "truncation", "t": t, "seed": int(seed), "attempt": attempt})
        if t == 0:
            return cand
        if not verify or _truncation_ok(M, cand, t):
            if rank_of_columns(cand.matrix, range(N)) != t:
                continue
            cand.info["verified"] = bool(verify)
            cand.info["failure_bound"] = 0.0 if verify else bound
            if not verify and bound > 2.0 ** (-P_conf):
                warnings.warn(f"truncation failure bound {bound:.3g} exceeds 2^-{P_conf}")
            return cand
    raise MatroidError("random truncation failed verification repeatedly")


def _truncation_ok(M: LinearMatroid, cand: LinearMatroid, t: int) -> bool:
    for S in combinations(range(len(M)), t):
        if rank_of_columns(M.matrix, S) == t and rank_of_columns(cand.matrix, S) != t:
            return False
    return True


def is_independent(M: LinearMatroid, S: Iterable[Hashable]) -> bool:
    return M.is_independent(S)
