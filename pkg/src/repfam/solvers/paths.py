"""Path families and the solvers built on them: k-path, cheap tour, long cycle."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graphs import Digraph, Graph, dfs_path_or_shallow, reachable_from
from ..repfam import WeightedSetFamily
from ..sepcol import UniformReducer
from .common import InputError, SolverResult, TrackingReducer, get_reducer
from .validate import validate_cycle, validate_path


@dataclass
class PathFamilyTable:
    """``levels[i][v]``: i-vertex paths source -> v, each set carrying its vertex order."""

    n: int
    source: int
    ell: int
    p: int
    levels: dict = field(default_factory=dict)

    def family(self, v: int, i: int) -> WeightedSetFamily:
        F = self.levels.get(i, {}).get(v)
        return F if F is not None else WeightedSetFamily(self.n, set_size=i)

    def sizes(self) -> dict[int, int]:
        """Largest family at each level."""
        return {i: max((len(F) for F in lvl.values()), default=0) for i, lvl in sorted(self.levels.items())}


def _tracker(reducer, seed, P_conf, pipeline) -> TrackingReducer:
    if isinstance(reducer, TrackingReducer):
        return reducer
    return TrackingReducer(get_reducer(seed, P_conf, pipeline, reducer))


def path_families(G: Graph | Digraph, source: int, ell: int, p: int, weighted: bool = False,
                  reducer: UniformReducer | TrackingReducer | None = None, seed: int = 0,
                  P_conf: int = 40, pipeline: str = "default") -> PathFamilyTable:
    """For each v and i <= p, an (ell - i)-representative family of i-vertex source -> v paths.

    With ``weighted`` the families are min-representative for path cost.
    """
    if not 1 <= p <= ell:
        raise InputError(f"need 1 <= p <= ell, got p={p}, ell={ell}")
    if not 0 <= source < G.n:
        raise InputError(f"source {source} outside the graph")
    R = _tracker(reducer, seed, P_conf, pipeline)
    n = G.n
    table = PathFamilyTable(n, source, ell, p)
    cur = {source: WeightedSetFamily(n, [1 << source], [0], payloads=[(source,)])}
    table.levels[1] = cur
    for i in range(1, p):
        nxt = {}
        for v in range(n):
            bit = 1 << v
            fam = WeightedSetFamily(n, set_size=i + 1)
            for w in G.in_neighbors(v):
                F = cur.get(w)
                if F is None:
                    continue
                c = G.weight(w, v) if weighted else 0
                for m, wt, order in F.members():
                    if not m & bit:
                        fam.add(m | bit, wt + c, order + (v,))
            if len(fam):
                nxt[v] = R.reduce(fam, ell - i - 1)
        table.levels[i + 1] = nxt
        cur = nxt
        if not cur:
            break
    return table


def _with_source(G: Graph | Digraph) -> Graph | Digraph:
    return G.add_source_vertex(0) if G.directed else G.add_universal_vertex(0)


def k_path(G: Graph | Digraph, k: int, seed: int = 0, P_conf: int = 40, pipeline: str = "default",
           reducer: UniformReducer | None = None, preprocess: bool = True) -> SolverResult:
    """A simple path with at least k edges, or a NO verdict."""
    if k < 0:
        raise InputError("k must be non-negative")
    R = _tracker(reducer, seed, P_conf, pipeline)
    stats: dict = {}
    if k == 0 and G.n:
        return SolverResult(True, [0], 0, R.provenance(), {"method": "trivial"})
    if k >= G.n:
        return SolverResult(False, None, None, R.provenance(), {"method": "too_short"})
    if preprocess and not G.directed:
        out = dfs_path_or_shallow(G, k)
        if out.path is not None:
            validate_path(G, out.path, k)
            return SolverResult(True, out.path, None, R.provenance(), {"method": "dfs"})
        if G.m > k * G.n:
            raise AssertionError("shallow DFS forest with more than k*n edges")
        stats["dfs_depth"] = max(out.depth, default=0)
    H = _with_source(G)
    s = G.n
    table = path_families(H, s, k + 2, k + 2, reducer=R)
    stats.update(method="families", family_sizes=table.sizes())
    for v in range(G.n):
        F = table.family(v, k + 2)
        if len(F):
            path = list(F.payloads[0][1:])
            validate_path(G, path, k)
            return SolverResult(True, path, None, R.provenance(), stats)
    return SolverResult(False, None, None, R.provenance(), stats)


def short_cheap_tour(G: Graph | Digraph, k: int, k_max: int | None = None, seed: int = 0,
                     P_conf: int = 40, pipeline: str = "default",
                     reducer: UniformReducer | None = None) -> SolverResult:
    """Cheapest simple path whose edge count lies in [k, k_max] (default k_max = k).

    With non-negative costs every longer path has a k-edge prefix that is no
    more expensive, so the default cap already gives the cheapest path of
    length at least k.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    k_max = k if k_max is None else k_max
    if k_max < k:
        raise InputError("k_max must be at least k")
    R = _tracker(reducer, seed, P_conf, pipeline)
    H = _with_source(G)
    s = G.n
    best: tuple[int, list[int]] | None = None
    sizes = {}
    for L in range(k, min(k_max, G.n - 1) + 1):
        table = path_families(H, s, L + 2, L + 2, weighted=True, reducer=R)
        sizes[L] = table.sizes()
        for v in range(G.n):
            top = table.family(v, L + 2).best()
            if top is not None and (best is None or top[1] < best[0]):
                best = (top[1], list(top[2][1:]))
    stats = {"family_sizes": sizes}
    if best is None:
        return SolverResult(False, None, None, R.provenance(), stats)
    cost, path = best
    if validate_path(G, path, k) != cost:
        raise AssertionError("tour cost does not match its edges")
    return SolverResult(True, path, cost, R.provenance(), stats)


def long_directed_cycle(D: Digraph, k: int, seed: int = 0, P_conf: int = 40, pipeline: str = "default",
                        reducer: UniformReducer | None = None) -> SolverResult:
    """A simple directed cycle with at least k arcs, or a NO verdict.

    For every start u, k-vertex paths u -> v are kept in a family that is
    k-representative inside U(n, 2k); each is closed by a search from v back
    to u that avoids the path's interior.
    """
    if not D.directed:
        raise InputError("long_directed_cycle needs a digraph")
    if k < 0:
        raise InputError("k must be non-negative")
    R = _tracker(reducer, seed, P_conf, pipeline)
    kk = max(k, 2)
    if kk > D.n:
        return SolverResult(False, None, None, R.provenance(), {})
    sizes = {}
    for u in range(D.n):
        table = path_families(D, u, 2 * kk, kk, reducer=R)
        sizes[u] = table.sizes()
        for v in range(D.n):
            for _, _, order in table.family(v, kk).members():
                inner = set(order) - {u, v}
                parent = reachable_from(D, v, avoid=inner)
                if parent[u] is None:
                    continue
                back = []
                x = parent[u]
                while x != v:
                    back.append(x)
                    x = parent[x]
                cycle = list(order) + back[::-1]
                validate_cycle(D, cycle, k)
                return SolverResult(True, cycle, None, R.provenance(), {"family_sizes": sizes})
    return SolverResult(False, None, None, R.provenance(), {"family_sizes": sizes})
