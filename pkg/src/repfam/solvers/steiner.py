"""Steiner tree by dynamic programming over a nice tree decomposition.

For a node t and a set Z of bag vertices used by the solution, a partial
solution is a forest of already-final edges whose components each meet Z.
Only its partition of Z matters for the future, encoded as a star forest on
the complete graph K[Z]. Families are shrunk with min-weight representative
sets in the graphic matroid of K[Z], which keeps at most 2^|Z| entries.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

from ..ffmat import SMALL_FIELD
from ..graphs import DecompositionError, Graph, TreeDecomposition, niceify
from ..matroids import graphic_matroid
from ..repfam import WeightedSetFamily, rep_linear
from .common import InputError, SolverResult
from .validate import validate_steiner

EMPTY, COMPLETE = "empty", "complete"


def _canon(blocks) -> tuple:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@lru_cache(maxsize=None)
def _clique(z: int):
    """Graphic matroid of K_z and the position of each pair."""
    pairs = list(combinations(range(z), 2))
    M = graphic_matroid((z, pairs), field=SMALL_FIELD)
    return M, {pr: i for i, pr in enumerate(pairs)}


def _star_mask(key: tuple, pos: dict, index: dict) -> int:
    m = 0
    for block in key:
        c = index[block[0]]
        for v in block[1:]:
            m |= 1 << pos[(c, index[v])]
    return m


def _shrink(Z: frozenset, entries: dict) -> dict:
    z = len(Z)
    if z <= 1:
        return entries
    groups: dict[int, list] = {}
    for key in entries:
        groups.setdefault(z - len(key), []).append(key)
    M, pos = _clique(z)
    index = {v: i for i, v in enumerate(sorted(Z))}
    out = {}
    for i, keys in groups.items():
        if len(keys) <= comb(z - 1, i):
            for key in keys:
                out[key] = entries[key]
            continue
        fam = WeightedSetFamily(len(pos), set_size=i, sense="min")
        for key in keys:
            fam.add(_star_mask(key, pos, index), entries[key][0], key)
        for _, _, key in rep_linear(M, fam, z - 1 - i, "min").members():
            out[key] = entries[key]
    return out


def _put(bucket: dict, key, w: int, edges: frozenset) -> None:
    old = bucket.get(key)
    if old is None or w < old[0]:
        bucket[key] = (w, edges)


def _join_partitions(k1: tuple, k2: tuple) -> tuple | None:
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for key in (k1, k2):
        for block in key:
            for v in block[1:]:
                a, b = find(block[0]), find(v)
                if a == b:
                    return None
                parent[a] = b
    groups: dict = {}
    for block in k1:
        for v in block:
            groups.setdefault(find(v), []).append(v)
    return _canon(groups.values())


def steiner_tree(G: Graph, terminals, td: TreeDecomposition) -> SolverResult:
    """Minimum-weight connected edge set spanning the terminals."""
    T = frozenset(terminals)
    if not T:
        raise InputError("terminal set is empty")
    if any(not 0 <= t < G.n for t in T):
        raise InputError("terminal outside the graph")
    try:
        td.validate(G)
    except DecompositionError as exc:
        raise InputError(f"invalid tree decomposition: {exc}") from None
    if len(T) == 1:
        return SolverResult(True, [], 0, {"deterministic": True}, {})
    nice = niceify(td)
    forgotten = [0] * len(nice)
    states: list[dict | None] = [None] * len(nice)
    max_family = 0
    fill = 0.0
    for t, kind in enumerate(nice.kinds):
        ch = nice.children[t]
        for c in ch:
            forgotten[t] += forgotten[c]
        bag = nice.bags[t]
        S: dict[frozenset, dict] = {}
        if kind == "base":
            S[frozenset()] = {EMPTY: (0, frozenset())}
        elif kind == "introduce":
            v = nice.vertex[t]
            for Z, ent in states[ch[0]].items():
                S[Z] = dict(ent)
                if not Z:
                    if EMPTY in ent:
                        S[frozenset([v])] = {((v,),): ent[EMPTY]}
                else:
                    S[Z | {v}] = {_canon(key + ((v,),)): val for key, val in ent.items()}
        elif kind == "forget":
            v = nice.vertex[t]
            if v in T:
                forgotten[t] += 1
            done = forgotten[t] == len(T)
            for Zc, ent in states[ch[0]].items():
                if v not in Zc:
                    if v not in T:
                        bucket = S.setdefault(Zc, {})
                        for key, (w, E) in ent.items():
                            _put(bucket, key, w, E)
                    continue
                Z = Zc - {v}
                bucket = S.setdefault(Z, {})
                nbrs = [z for z in sorted(Z) if G.has_edge(v, z)]
                for key, (w, E) in ent.items():
                    block_of = {x: b for b, blk in enumerate(key) for x in blk}
                    bv = block_of[v]
                    for r in range(len(nbrs) + 1):
                        for X in combinations(nbrs, r):
                            hit = [block_of[z] for z in X]
                            if bv in hit or len(set(hit)) != len(hit):
                                continue
                            merged = set(key[bv]) - {v}
                            for b in hit:
                                merged |= set(key[b])
                            if not merged:
                                if Z or not done:
                                    continue
                                nk = COMPLETE
                            else:
                                rest = [blk for b, blk in enumerate(key) if b != bv and b not in hit]
                                nk = _canon(rest + [merged])
                            nw = w + sum(G.weight(v, z) for z in X)
                            _put(bucket, nk, nw, E | {(min(v, z), max(v, z)) for z in X})
        elif kind == "join":
            A, B = states[ch[0]], states[ch[1]]
            for Z in A.keys() & B.keys():
                bucket = S.setdefault(Z, {})
                for k1, (w1, E1) in A[Z].items():
                    for k2, (w2, E2) in B[Z].items():
                        if not Z:
                            if k1 == COMPLETE and k2 == COMPLETE:
                                continue
                            nk = COMPLETE if COMPLETE in (k1, k2) else EMPTY
                        else:
                            nk = _join_partitions(k1, k2)
                            if nk is None:
                                continue
                        _put(bucket, nk, w1 + w2, E1 | E2)
        else:
            raise InputError(f"unexpected node kind {kind}")
        need = T & bag
        S = {Z: ent for Z, ent in S.items() if ent and need <= Z}
        for Z in S:
            S[Z] = _shrink(Z, S[Z])
            if len(S[Z]) > 2 ** len(Z):
                raise AssertionError(f"size invariant broken at node {t}: {len(S[Z])} > 2^{len(Z)}")
            max_family = max(max_family, len(S[Z]))
            fill = max(fill, len(S[Z]) / 2 ** len(Z))
        states[t] = S
        for c in ch:
            states[c] = None
    root = states[nice.root].get(frozenset(), {})
    stats = {"nodes": len(nice), "width": nice.width, "max_family": max_family, "max_fill": fill}
    if COMPLETE not in root:
        return SolverResult(False, None, None, {"deterministic": True}, stats)
    w, E = root[COMPLETE]
    edges = sorted(E)
    validate_steiner(G, T, edges, w)
    return SolverResult(True, edges, w, {"deterministic": True}, stats)
