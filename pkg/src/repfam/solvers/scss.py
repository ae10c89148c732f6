"""Minimum strongly connected spanning subdigraph and minimum equivalent graph.

A strong spanning subdigraph is the union of an out-branching and an
in-branching rooted at a fixed vertex s, so the task is to maximise the
number (or weight) of arcs the two branchings share. Shared arc sets are
built one arc at a time as independent sets of four stacked matroids and
kept small with representative families; each surviving candidate is then
completed with two minimum-cost arborescence computations.
"""

from __future__ import annotations

from ..ffmat import SMALL_FIELD
from ..graphs import Digraph, min_cost_arborescence, scc
from ..matroids import LinearMatroid, direct_sum, graphic_matroid, partition_matroid
from ..repfam import WeightedSetFamily, rep_linear
from .common import InputError, SolverResult
from .validate import validate_equivalent, validate_strong


def four_matroids(D: Digraph, s: int = 0) -> LinearMatroid:
    """M1 + M2 + M3 + M4 with ground labels (arc index, copy)."""
    arcs = D.arcs()
    m = len(arcs)
    f = SMALL_FIELD
    M1 = graphic_matroid((D.n, arcs), labels=[(i, 1) for i in range(m)], field=f)
    M2 = graphic_matroid((D.n, arcs), labels=[(i, 2) for i in range(m)], field=f)
    heads: dict[int, list] = {}
    tails: dict[int, list] = {}
    for i, (u, v) in enumerate(arcs):
        if v != s:
            heads.setdefault(v, []).append((i, 3))
        if u != s:
            tails.setdefault(u, []).append((i, 4))
    M3 = partition_matroid([heads[v] for v in sorted(heads)], [1] * len(heads), field=f)
    M4 = partition_matroid([tails[u] for u in sorted(tails)], [1] * len(tails), field=f)
    return direct_sum([M1, M2, M3, M4])


def _independent_arcs(chosen: list[tuple[int, int]], n: int) -> bool:
    """Forest in the underlying multigraph with in- and out-degree at most one."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ins, outs = set(), set()
    for u, v in chosen:
        if v in ins or u in outs:
            return False
        ins.add(v)
        outs.add(u)
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
    return True


def common_arc_families(D: Digraph, weighted: bool = False, s: int = 0) -> list[WeightedSetFamily]:
    """families[l]: representative l-arc candidates for the shared part of the two branchings."""
    n = D.n
    arcs = D.arcs()
    M = four_matroids(D, s)
    elems = [[M.index((i, c)) for c in (1, 2, 3, 4)] if s not in a else None for i, a in enumerate(arcs)]
    N = len(M)
    fams = [WeightedSetFamily(N, [0], [0], payloads=[()], sense="min")]
    for l in range(1, n - 1):
        fam = WeightedSetFamily(N, set_size=4 * l, sense="min")
        for mask, w, chosen in fams[-1].members():
            for i in range(len(arcs)):
                if elems[i] is None or i in chosen:
                    continue
                cand = tuple(sorted(chosen + (i,)))
                if not _independent_arcs([arcs[j] for j in cand], n):
                    continue
                add = sum(1 << e for e in elems[i])
                fam.add(mask | add, w + (D.weight(*arcs[i]) if weighted else 0), cand)
        if not len(fam):
            break
        fams.append(rep_linear(M, fam, M.rank - 4 * l, "min"))
    return fams


def _complete(D: Digraph, F: tuple, weighted: bool, s: int):
    arcs = D.arcs()
    zero = {arcs[j] for j in F}

    def cost(u, v):
        if (u, v) in zero:
            return 0
        return D.weight(u, v) if weighted else 1

    out = min_cost_arborescence(D, s, cost, "out")
    inn = min_cost_arborescence(D, s, cost, "in")
    return out, inn


def min_scss(D: Digraph, weighted: bool = False) -> SolverResult:
    """Strong spanning subdigraph with the fewest arcs (or least weight)."""
    n = D.n
    if n == 0:
        raise InputError("empty digraph")
    if len(scc(D)) != 1:
        raise InputError("digraph is not strongly connected")
    if n == 1:
        return SolverResult(True, [], 0, {"deterministic": True}, {})
    s = 0
    fams = common_arc_families(D, weighted, s)
    stats = {"family_sizes": [len(F) for F in fams]}
    best = None
    for l in range(len(fams) - 1, -1, -1):
        for _, _, F in fams[l].members():
            (cp, O), (cm, I) = _complete(D, F, weighted, s)
            union = sorted(set(O) | set(I))
            if not weighted:
                if cp == cm == n - 1 - l:
                    best = (len(union), union)
                    break
                continue
            w = sum(D.weight(*a) for a in union)
            if best is None or w < best[0]:
                best = (w, union)
        if best is not None and not weighted:
            stats["common_arcs"] = l
            break
    value, arcs = best
    validate_strong(D, arcs)
    return SolverResult(True, arcs, value, {"deterministic": True}, stats)


def meg(D: Digraph, weighted: bool = False) -> SolverResult:
    """Minimum equivalent subdigraph: same reachability, fewest arcs (or least weight)."""
    comps = scc(D)
    comp_of = [0] * D.n
    for c, vs in enumerate(comps):
        for v in vs:
            comp_of[v] = c
    chosen: list[tuple[int, int]] = []
    sizes = {}
    for c, vs in enumerate(comps):
        if len(vs) < 2:
            continue
        sub, labels = D.induced(vs)
        r = min_scss(sub, weighted)
        sizes[c] = r.stats.get("family_sizes")
        chosen.extend((labels[u], labels[v]) for u, v in r.witness)
    cheapest: dict[tuple[int, int], tuple[int, tuple[int, int]]] = {}
    for u, v, w in D.weighted_arcs():
        a, b = comp_of[u], comp_of[v]
        if a != b:
            key = (a, b)
            if key not in cheapest or (w if weighted else 0) < cheapest[key][0]:
                cheapest[key] = (w if weighted else 0, (u, v))
    r = len(comps)
    succ = [set() for _ in range(r)]
    for a, b in cheapest:
        succ[a].add(b)
    reach = [set() for _ in range(r)]
    for a in range(r):
        stack = list(succ[a])
        while stack:
            x = stack.pop()
            if x not in reach[a]:
                reach[a].add(x)
                stack.extend(succ[x])
    for (a, b), (_, arc) in sorted(cheapest.items()):
        if not any(b in reach[c] for c in succ[a] if c != b):
            chosen.append(arc)
    chosen.sort()
    validate_equivalent(D, chosen)
    value = sum(D.weight(*a) for a in chosen) if weighted else len(chosen)
    return SolverResult(True, chosen, value, {"deterministic": True}, {"components": len(comps), "family_sizes": sizes})
