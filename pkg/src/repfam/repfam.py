"""Weighted set families and q-representative families over linear matroids."""

from __future__ import annotations

import math
import weakref
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np

from .ffmat import checked_sum, column_basis_in_order, greedy_order
from .matroids import LinearMatroid, truncate


class FamilyError(ValueError):
    pass


class RankMismatchError(FamilyError):
    pass


class DependentSetError(FamilyError):
    pass


def _check_sense(sense: str) -> str:
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    return sense


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class WeightedSetFamily:
    """A p-family of subsets of a labelled universe with non-negative weights.

    Sets are stored as int bitmasks over universe positions. Each set may carry
    an opaque payload (a path ordering, an embedding, an edge set, ...).
    Adding a set already present keeps the sense-optimal weight.
    """

    def __init__(self, universe, sets: Iterable = (), weights: Iterable[int] | None = None,
                 set_size: int | None = None, payloads: Iterable | None = None, sense: str = "min"):
        self.universe = tuple(range(universe)) if isinstance(universe, int) else tuple(universe)
        self.sense = _check_sense(sense)
        self.set_size = set_size
        self._masks: list[int] = []
        self._weights: list[int] = []
        self._payloads: list[Any] = []
        self._pos: dict[int, int] = {}
        sets = list(sets)
        weights = [0] * len(sets) if weights is None else list(weights)
        payloads = [None] * len(sets) if payloads is None else list(payloads)
        if not (len(sets) == len(weights) == len(payloads)):
            raise FamilyError("sets, weights and payloads differ in length")
        for s, w, pl in zip(sets, weights, payloads):
            self.add(s if isinstance(s, int) else mask_of(s), w, pl)

    @classmethod
    def empty_like(cls, other: "WeightedSetFamily", set_size: int | None = None) -> "WeightedSetFamily":
        return cls(other.universe, set_size=other.set_size if set_size is None else set_size, sense=other.sense)

    def add(self, mask: int, weight: int = 0, payload: Any = None) -> None:
        weight = int(weight)
        if weight < 0:
            raise FamilyError("weights must be non-negative")
        if weight > (1 << 63) - 1:
            raise OverflowError("weight exceeds 64-bit range")
        if mask >> len(self.universe):
            raise FamilyError("set leaves the universe")
        size = mask.bit_count()
        if self.set_size is None:
            self.set_size = size
        elif size != self.set_size:
            raise FamilyError(f"set of size {size} in a {self.set_size}-family")
        at = self._pos.get(mask)
        if at is None:
            self._pos[mask] = len(self._masks)
            self._masks.append(mask)
            self._weights.append(weight)
            self._payloads.append(payload)
        elif (weight < self._weights[at]) if self.sense == "min" else (weight > self._weights[at]):
            self._weights[at] = weight
            self._payloads[at] = payload

    def __len__(self) -> int:
        return len(self._masks)

    def __iter__(self) -> Iterator[frozenset]:
        return (frozenset(bits(m)) for m in self._masks)

    def __contains__(self, s) -> bool:
        return (s if isinstance(s, int) else mask_of(s)) in self._pos

    @property
    def masks(self) -> list[int]:
        return list(self._masks)

    @property
    def weights(self) -> list[int]:
        return list(self._weights)

    @property
    def payloads(self) -> list[Any]:
        return list(self._payloads)

    @property
    def sets(self) -> list[frozenset]:
        return list(self)

    def members(self) -> Iterator[tuple[int, int, Any]]:
        return zip(self._masks, self._weights, self._payloads)

    def weight_of(self, s) -> int:
        return self._weights[self._pos[s if isinstance(s, int) else mask_of(s)]]

    def payload_of(self, s) -> Any:
        return self._payloads[self._pos[s if isinstance(s, int) else mask_of(s)]]

    def labels(self, mask: int) -> list:
        return [self.universe[i] for i in bits(mask)]

    def subfamily(self, positions: Iterable[int]) -> "WeightedSetFamily":
        out = WeightedSetFamily.empty_like(self)
        for i in positions:
            out.add(self._masks[i], self._weights[i], self._payloads[i])
        return out

    def best(self) -> tuple[int, int, Any] | None:
        if not self._masks:
            return None
        i = greedy_order(self._weights, self.sense)[0]
        return self._masks[i], self._weights[i], self._payloads[i]

    def __repr__(self):
        return f"WeightedSetFamily(p={self.set_size}, n={len(self.universe)}, t={len(self)})"


def _same_universe(A: WeightedSetFamily, B: WeightedSetFamily) -> None:
    if A.universe != B.universe:
        raise FamilyError("families live on different universes")


def _pair(a, b):
    return None if a is None and b is None else (a, b)


def family_product(A: WeightedSetFamily, B: WeightedSetFamily, sense: str | None = None,
                   combine: Callable[[Any, Any], Any] | None = None) -> WeightedSetFamily:
    """All disjoint unions X | Y with X in A and Y in B; weights add."""
    _same_universe(A, B)
    sense = _check_sense(sense or A.sense)
    combine = combine or _pair
    p = (A.set_size or 0) + (B.set_size or 0)
    out = WeightedSetFamily(A.universe, set_size=p, sense=sense)
    for ma, wa, pa in A.members():
        for mb, wb, pb in B.members():
            if ma & mb == 0:
                out.add(ma | mb, checked_sum((wa, wb)), combine(pa, pb))
    return out


def family_union(families: Sequence[WeightedSetFamily], sense: str | None = None) -> WeightedSetFamily:
    families = list(families)
    if not families:
        raise FamilyError("union of no families")
    first = families[0]
    out = WeightedSetFamily(first.universe, set_size=first.set_size, sense=_check_sense(sense or first.sense))
    for F in families:
        _same_universe(first, F)
        for m, w, pl in F.members():
            out.add(m, w, pl)
    return out


# ---------------------------------------------------------------- wedge vectors

@lru_cache(maxsize=None)
def colex_subsets(k: int, m: int) -> tuple[tuple[int, ...], ...]:
    """All m-subsets of range(k) in colexicographic order."""
    from itertools import combinations
    return tuple(sorted(combinations(range(k), m), key=lambda c: c[::-1]))


def colex_rank(I: Sequence[int]) -> int:
    return sum(math.comb(c, i + 1) for i, c in enumerate(I))


@lru_cache(maxsize=None)
def _expansion_tables(k: int, m: int):
    subs = colex_subsets(k, m)
    rows = np.array(subs, dtype=np.intp).reshape(len(subs), m)
    sub = np.empty_like(rows)
    for r, I in enumerate(subs):
        for pos in range(m):
            sub[r, pos] = colex_rank(I[:pos] + I[pos + 1:])
    sign = np.array([1 if (pos + m - 1) % 2 == 0 else -1 for pos in range(m)], dtype=np.int64)
    return rows, sub, sign


def wedge_batch(B: np.ndarray, P: int) -> np.ndarray:
    """All maximal minors of a stack of k x p matrices.

    ``B`` has shape (t, k, p). Row I of the result (colex order over p-subsets
    of range(k)) is det(B[:, I, :]), built one column at a time by expanding
    along the last column.
    """
    t, k, p = B.shape
    if p == 0:
        out = np.ones((t, 1), dtype=B.dtype if B.dtype == object else np.int64)
        return out
    w = np.array(B[:, :, 0])
    for j in range(1, p):
        rows, sub, sign = _expansion_tables(k, j + 1)
        acc = np.zeros((t, rows.shape[0]), dtype=B.dtype)
        for pos in range(j + 1):
            term = B[:, rows[:, pos], j] * w[:, sub[:, pos]] % P
            acc = acc + term if sign[pos] > 0 else acc - term
        w = acc % P
    return w


def wedge_vector(M: LinearMatroid, cols: Iterable[int]) -> list[int]:
    """Vector of p x p minors det(A[I, cols]) over I in colex order (cols ascending)."""
    cols = sorted(cols)
    a = M.matrix.array
    B = a[:, cols][None, :, :] if cols else M.field.zeros((1, M.rank, 0))
    return [int(x) for x in wedge_batch(B, M.field.modulus)[0]]


_BLOCKS: "weakref.WeakKeyDictionary[LinearMatroid, tuple]" = weakref.WeakKeyDictionary()


def block_structure(M: LinearMatroid):
    """Split the representation into independent row/column blocks.

    Returns (blocks, col_block) where each block is (rows, cols) and
    col_block[j] is the block of column j, or -1 for a zero column.
    """
    hit = _BLOCKS.get(M)
    if hit is not None:
        return hit
    a = M.matrix.array
    k, N = a.shape
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    col_row = [-1] * N
    nz = a != 0
    for j in range(N):
        rs = np.flatnonzero(nz[:, j])
        if rs.size:
            col_row[j] = int(rs[0])
            r0 = find(int(rs[0]))
            for r in rs[1:]:
                r1 = find(int(r))
                if r1 != r0:
                    parent[r1] = r0
    roots = {}
    for r in range(k):
        roots.setdefault(find(r), len(roots))
    rows_of = [[] for _ in roots]
    for r in range(k):
        rows_of[roots[find(r)]].append(r)
    cols_of = [[] for _ in roots]
    col_block = [-1] * N
    for j in range(N):
        if col_row[j] >= 0:
            b = roots[find(col_row[j])]
            col_block[j] = b
            cols_of[b].append(j)
    blocks = tuple((np.array(r, dtype=np.intp), np.array(c, dtype=np.intp)) for r, c in zip(rows_of, cols_of))
    res = (blocks, tuple(col_block))
    _BLOCKS[M] = res
    return res


def _group_wedges(M: LinearMatroid, masks: Sequence[int], pattern: tuple, blocks) -> np.ndarray:
    """Wedge vectors (one row per set) for sets sharing a block pattern.

    Within a pattern the full wedge vector equals, up to a sign per row of H
    and a sign per set, the Kronecker product of per-block wedge vectors.
    Neither sign changes which column sets are independent.
    """
    a = M.matrix.array
    P = M.field.modulus
    t = len(masks)
    out = None
    for b, c in enumerate(pattern):
        if c == 0:
            continue
        rows, cols = blocks[b]
        colset = set(cols.tolist())
        B = np.empty((t, len(rows), c), dtype=a.dtype)
        for i, m in enumerate(masks):
            sel = [j for j in bits(m) if j in colset]
            B[i] = a[np.ix_(rows, sel)]
        w = wedge_batch(B, P)
        out = w if out is None else (out[:, :, None] * w[:, None, :]).reshape(t, -1) % P
    if out is None:
        out = np.ones((t, 1), dtype=a.dtype)
    return out


def rep_linear(M: LinearMatroid, S: WeightedSetFamily, q: int, sense: str | None = None) -> WeightedSetFamily:
    """A q-representative subfamily of S in M with at most C(p+q, p) sets.

    Every set of S must be independent in M and rank(M) must equal p + q.
    For sense "min" (or "max") the kept sets also dominate by weight.
    """
    sense = _check_sense(sense or S.sense)
    if len(S.universe) != len(M):
        raise FamilyError("family universe and matroid ground set differ in size")
    p = S.set_size or 0
    if q < 0:
        raise FamilyError("q must be non-negative")
    if M.rank != p + q:
        raise RankMismatchError(f"rank(M)={M.rank} but p+q={p + q}; truncate first")
    out = WeightedSetFamily(S.universe, set_size=p, sense=sense)
    if not len(S):
        return out
    blocks, col_block = block_structure(M)
    caps = [len(r) for r, _ in blocks]
    groups: dict[tuple, list[int]] = {}
    masks, weights = S.masks, S.weights
    for i, m in enumerate(masks):
        counts = [0] * len(blocks)
        for j in bits(m):
            b = col_block[j]
            if b < 0:
                raise DependentSetError(f"set {S.labels(m)} contains a loop")
            counts[b] += 1
        if any(c > cap for c, cap in zip(counts, caps)):
            raise DependentSetError(f"set {S.labels(m)} is dependent")
        groups.setdefault(tuple(counts), []).append(i)
    P = M.field.modulus
    chosen = []
    for pattern, members in groups.items():
        H = _group_wedges(M, [masks[i] for i in members], pattern, blocks)
        if np.any(~(H != 0).any(axis=1)):
            bad = members[int(np.flatnonzero(~(H != 0).any(axis=1))[0])]
            raise DependentSetError(f"set {S.labels(masks[bad])} is dependent")
        order = greedy_order([weights[i] for i in members], sense)
        chosen.extend(members[c] for c in column_basis_in_order(H.T, P, order))
    chosen.sort()
    for i in chosen:
        out.add(masks[i], weights[i], S.payloads[i])
    return out


def rep_linear_auto(M: LinearMatroid, S: WeightedSetFamily, q: int, sense: str | None = None,
                    seed: int = 0, P_conf: int = 40) -> WeightedSetFamily:
    """Like rep_linear, truncating M to rank p + q first when needed."""
    p = S.set_size or 0
    if M.rank < p + q:
        raise RankMismatchError(f"rank(M)={M.rank} below p+q={p + q}")
    if M.rank > p + q:
        M = truncate(M, p + q, seed=seed, P_conf=P_conf)
    return rep_linear(M, S, q, sense)


# ---------------------------------------------------------------- text format

def write_family(S: WeightedSetFamily, q: int) -> str:
    p = S.set_size or 0
    lines = [f"{p} {q} {len(S.universe)} {len(S)}"]
    for m, w, _ in S.members():
        lines.append(" ".join([str(w)] + [str(i) for i in bits(m)]))
    return "\n".join(lines) + "\n"


def read_family(text: str, sense: str = "min") -> tuple[WeightedSetFamily, int]:
    """Parse the ``p q n t`` header format; returns (family, q)."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if not rows:
        raise FamilyError("line 1: missing header")
    lineno, head = rows[0]
    try:
        p, q, n, t = (int(x) for x in head.split())
    except ValueError:
        raise FamilyError(f"line {lineno}: header must be 'p q n t'") from None
    if min(p, q, n, t) < 0:
        raise FamilyError(f"line {lineno}: negative header field")
    if len(rows) - 1 != t:
        raise FamilyError(f"line {lineno}: header announces {t} sets, found {len(rows) - 1}")
    S = WeightedSetFamily(n, set_size=p, sense=sense)
    for lineno, line in rows[1:]:
        try:
            vals = [int(x) for x in line.split()]
        except ValueError:
            raise FamilyError(f"line {lineno}: non-integer token") from None
        w, idx = vals[0], vals[1:]
        if len(idx) != p or len(set(idx)) != p:
            raise FamilyError(f"line {lineno}: expected {p} distinct indices")
        if any(not 0 <= i < n for i in idx):
            raise FamilyError(f"line {lineno}: index outside universe")
        if w < 0:
            raise FamilyError(f"line {lineno}: negative weight")
        S.add(mask_of(idx), w)
    return S, q
