"""Brute-force reference answers. Deliberately naive; no solver code is used.

Every oracle refuses instances above its size limit with OracleRefusal, so a
test can never pass by silently skipping the check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .graphs import Digraph, Graph, TreeDecomposition
from .matroids import LinearMatroid
from .repfam import WeightedSetFamily, bits

MAX_REP_UNIVERSE = 14


class OracleRefusal(ValueError):
    pass


def _refuse_if(cond: bool, msg: str) -> None:
    if cond:
        raise OracleRefusal(msg)


# ---------------------------------------------------------------- representative families

@dataclass
class RepCheck:
    ok: bool
    Y: frozenset | None = None
    X: frozenset | None = None

    def __bool__(self):
        return self.ok


def brute_rep_check(M, S: WeightedSetFamily, q: int, candidate: WeightedSetFamily,
                    sense: str | None = None) -> RepCheck:
    """Check the definition literally over every Y of size at most q.

    ``M`` is a LinearMatroid or ``("uniform", n, k)``. With ``sense`` set to
    "min" or "max" the kept extender must also be at least as good by weight.
    A failure reports a set Y and the set X of S that Y extends.
    """
    if isinstance(M, LinearMatroid):
        N = len(M)
        cache: dict[int, bool] = {}

        def independent(mask: int) -> bool:
            r = cache.get(mask)
            if r is None:
                r = cache[mask] = M.is_independent([M.ground[i] for i in bits(mask)])
            return r
    else:
        kind, N, k = M
        _refuse_if(kind != "uniform", f"unknown matroid spec {M!r}")

        def independent(mask: int) -> bool:
            return mask.bit_count() <= k
    _refuse_if(N > MAX_REP_UNIVERSE, f"universe {N} exceeds {MAX_REP_UNIVERSE}")
    if len(S.universe) != N or len(candidate.universe) != N:
        raise ValueError("universe sizes differ")
    s_items = list(zip(S.masks, S.weights))
    c_items = list(zip(candidate.masks, candidate.weights))
    s_weight = dict(s_items)
    for m, w in c_items:
        if m not in s_weight:
            return RepCheck(False, None, frozenset(bits(m)))
    for size in range(q + 1):
        for Yt in combinations(range(N), size):
            Y = sum(1 << i for i in Yt)
            fits = [(m, w) for m, w in s_items if not m & Y and independent(m | Y)]
            if not fits:
                continue
            kept = [w for m, w in c_items if not m & Y and independent(m | Y)]
            if sense == "min":
                target = min(fits, key=lambda t: t[1])
                good = bool(kept) and min(kept) <= target[1]
            elif sense == "max":
                target = max(fits, key=lambda t: t[1])
                good = bool(kept) and max(kept) >= target[1]
            else:
                target = fits[0]
                good = bool(kept)
            if not good:
                return RepCheck(False, frozenset(Yt), frozenset(bits(target[0])))
    return RepCheck(True)


# ---------------------------------------------------------------- paths and cycles

def _succ(G) -> list[list[int]]:
    return [sorted(G.out_neighbors(v)) for v in range(G.n)]


def _all_simple_paths(G, max_edges: int):
    """Every simple path with 0..max_edges edges, as vertex tuples."""
    nb = _succ(G)
    stack = [(v,) for v in range(G.n)]
    while stack:
        path = stack.pop()
        yield path
        if len(path) - 1 < max_edges:
            on = set(path)
            for w in nb[path[-1]]:
                if w not in on:
                    stack.append(path + (w,))


def brute_k_path(G: Graph | Digraph, k: int) -> list[int] | None:
    """Some simple path with exactly k edges, or None."""
    _refuse_if(G.n > 12, "path oracle limited to 12 vertices")
    for path in _all_simple_paths(G, k):
        if len(path) - 1 == k:
            return list(path)
    return None


def brute_cheapest_path(G: Graph | Digraph, k: int, k_max: int | None = None) -> int | None:
    """Minimum cost over simple paths with between k and k_max edges."""
    _refuse_if(G.n > 12, "path oracle limited to 12 vertices")
    k_max = G.n - 1 if k_max is None else k_max
    best = None
    for path in _all_simple_paths(G, k_max):
        if len(path) - 1 >= k:
            c = sum(G.weight(a, b) for a, b in zip(path, path[1:]))
            best = c if best is None else min(best, c)
    return best


def brute_long_cycle(D: Digraph, k: int) -> list[int] | None:
    """Some simple directed cycle with at least k arcs, or None."""
    _refuse_if(D.n > 12, "cycle oracle limited to 12 vertices")
    nb = _succ(D)
    need = max(k, 2)
    for s in range(D.n):
        stack = [(s,)]
        while stack:
            path = stack.pop()
            for w in nb[path[-1]]:
                if w == s and len(path) >= need:
                    return list(path)
                if w > s and w not in path:
                    stack.append(path + (w,))
    return None


# ---------------------------------------------------------------- Steiner tree

def _mst_weight(G: Graph, verts: Sequence[int]) -> int | None:
    vs = set(verts)
    start = min(vs)
    inside = {start}
    total = 0
    while inside != vs:
        best = None
        for a in inside:
            for b in G.neighbors(a):
                if b in vs and b not in inside:
                    w = G.weight(a, b)
                    if best is None or w < best[0]:
                        best = (w, b)
        if best is None:
            return None
        total += best[0]
        inside.add(best[1])
    return total


def brute_steiner(G: Graph, terminals: Sequence[int]) -> int | None:
    """Minimum Steiner tree weight, by trying every vertex set that contains T.

    A minimum Steiner tree on vertex set S is a minimum spanning tree of G[S],
    so this enumerates all candidate trees.
    """
    _refuse_if(G.n > 12, "Steiner oracle limited to 12 vertices")
    T = sorted(set(terminals))
    if len(T) <= 1:
        return 0
    rest = [v for v in range(G.n) if v not in T]
    best = None
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            w = _mst_weight(G, T + list(extra))
            if w is not None and (best is None or w < best):
                best = w
    return best


# ---------------------------------------------------------------- strong subgraphs

def _reach(n: int, arcs) -> tuple[int, ...]:
    out = [0] * n
    for u, v in arcs:
        out[u] |= 1 << v
    res = []
    for s in range(n):
        seen = 1 << s
        changed = True
        while changed:
            changed = False
            x = seen
            while x:
                b = x & -x
                x ^= b
                new = out[b.bit_length() - 1] & ~seen
                if new:
                    seen |= new
                    changed = True
        res.append(seen)
    return tuple(res)


def brute_scss(D: Digraph) -> list[tuple[int, int]]:
    """A strong spanning subdigraph with the fewest arcs."""
    _refuse_if(D.n > 6, "SCSS oracle limited to 6 vertices")
    full = tuple([(1 << D.n) - 1] * D.n)
    arcs = D.arcs()
    if _reach(D.n, arcs) != full:
        raise ValueError("digraph is not strongly connected")
    for size in range(len(arcs) + 1):
        for sub in combinations(arcs, size):
            if _reach(D.n, sub) == full:
                return list(sub)
    raise AssertionError("unreachable")


def brute_meg(D: Digraph, weighted: bool = False) -> tuple[int, list[tuple[int, int]]]:
    """Minimum equivalent subdigraph; returns (arc count or weight, arcs)."""
    _refuse_if(D.n > 6, "MEG oracle limited to 6 vertices")
    arcs = D.arcs()
    target = _reach(D.n, arcs)
    if not weighted:
        for size in range(len(arcs) + 1):
            for sub in combinations(arcs, size):
                if _reach(D.n, sub) == target:
                    return size, list(sub)
    _refuse_if(len(arcs) > 20, "weighted MEG oracle limited to 20 arcs")
    best = None
    for mask in range(1 << len(arcs)):
        sub = [arcs[i] for i in range(len(arcs)) if mask >> i & 1]
        w = sum(D.weight(*a) for a in sub)
        if (best is None or w < best[0]) and _reach(D.n, sub) == target:
            best = (w, sub)
    return best


# ---------------------------------------------------------------- subgraph isomorphism

def brute_subgraph_iso(G: Graph, T: Graph) -> dict[int, int] | None:
    """Injective edge-preserving map V(T) -> V(G) by backtracking, or None."""
    _refuse_if(G.n > 12, "isomorphism oracle limited to 12 host vertices")
    k = T.n
    if k > G.n:
        return None
    phi: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == k:
            return True
        for h in range(G.n):
            if h in used:
                continue
            if all(G.has_edge(h, phi[j]) for j in T.neighbors(i) if j < i):
                phi[i] = h
                used.add(h)
                if extend(i + 1):
                    return True
                del phi[i]
                used.discard(h)
        return False

    return dict(phi) if extend(0) else None


# ---------------------------------------------------------------- tree decompositions

def exact_tree_decomposition(G: Graph) -> TreeDecomposition:
    """Minimum-width tree decomposition via the subset DP over elimination orders."""
    n = G.n
    _refuse_if(n > 12, "exact treewidth limited to 12 vertices")
    if n == 0:
        return TreeDecomposition([frozenset()], [])
    nb = [sum(1 << w for w in G.neighbors(v)) for v in range(n)]
    full = (1 << n) - 1

    def q_size(S: int, v: int) -> int:
        # vertices outside S + v reachable from v through S
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            x = b.bit_length() - 1
            for_n = nb[x] & ~seen
            seen |= for_n
            out |= for_n & ~S
            frontier |= for_n & S
        return out.bit_count()

    tw = {0: -1}
    choice = {}
    for S in range(1, full + 1):
        best, arg = None, None
        x = S
        while x:
            b = x & -x
            x ^= b
            v = b.bit_length() - 1
            rest = S ^ b
            val = max(tw[rest], q_size(rest, v))
            if best is None or val < best:
                best, arg = val, v
        tw[S] = best
        choice[S] = arg
    order = []
    S = full
    while S:
        v = choice[S]
        order.append(v)
        S ^= 1 << v
    order.reverse()
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(G.neighbors(v)) for v in range(n)]
    bags, parent = [], []
    for v in order:
        higher = {w for w in adj[v] if pos[w] > pos[v]}
        for a in higher:
            adj[a] |= higher - {a}
        bags.append(frozenset(higher | {v}))
        parent.append(min(higher, key=pos.get) if higher else None)
    edges = []
    roots = []
    for i, v in enumerate(order):
        if parent[i] is None:
            roots.append(i)
        else:
            edges.append((i, pos[parent[i]]))
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(bags, edges)
