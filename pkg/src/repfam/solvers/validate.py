"""Witness validators. Each raises WitnessError on a bad witness."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Sequence

from ..graphs import Digraph, Graph


class WitnessError(AssertionError):
    pass


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise WitnessError(msg)


def validate_path(G: Graph | Digraph, path: Sequence[int], k: int) -> int:
    """Simple path with at least k edges; returns its weight."""
    _need(len(path) == len(set(path)), "path repeats a vertex")
    _need(len(path) - 1 >= k, f"path has {len(path) - 1} edges, need {k}")
    w = 0
    for a, b in zip(path, path[1:]):
        _need(G.has_edge(a, b), f"missing edge {a}-{b}")
        w += G.weight(a, b)
    return w


def validate_cycle(D: Digraph, cycle: Sequence[int], k: int) -> None:
    """Closed simple directed cycle listed without repeating the start."""
    _need(len(cycle) >= 2, "cycle too short")
    _need(len(cycle) == len(set(cycle)), "cycle repeats a vertex")
    _need(len(cycle) >= k, f"cycle has length {len(cycle)}, need {k}")
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        _need(D.has_arc(a, b), f"missing arc {a}->{b}")


def validate_steiner(G: Graph, terminals: Iterable[int], edges: Iterable[Sequence[int]], weight: int | None = None) -> int:
    T = set(terminals)
    E = [tuple(e) for e in edges]
    adj: dict[int, list[int]] = {}
    w = 0
    for u, v in E:
        _need(G.has_edge(u, v), f"missing edge {u}-{v}")
        w += G.weight(u, v)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if len(T) <= 1 and not E:
        return 0
    _need(T <= set(adj), "a terminal is not covered")
    start = next(iter(adj))
    seen = {start}
    dq = deque([start])
    while dq:
        x = dq.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                dq.append(y)
    _need(seen == set(adj), "edge set is disconnected")
    if weight is not None:
        _need(w == weight, f"reported weight {weight} but edges weigh {w}")
    return w


def _closure(n: int, arcs: Iterable[Sequence[int]]) -> list[int]:
    out = [0] * n
    for u, v in arcs:
        out[u] |= 1 << v
    reach = []
    for s in range(n):
        seen = 1 << s
        frontier = [s]
        while frontier:
            x = frontier.pop()
            new = out[x] & ~seen
            seen |= new
            while new:
                b = new & -new
                frontier.append(b.bit_length() - 1)
                new ^= b
        reach.append(seen)
    return reach


def validate_strong(D: Digraph, arcs: Iterable[Sequence[int]]) -> None:
    arcs = [tuple(a) for a in arcs]
    for a in arcs:
        _need(D.has_arc(*a), f"missing arc {a}")
    full = (1 << D.n) - 1
    _need(all(r == full for r in _closure(D.n, arcs)), "subdigraph is not strongly connected")


def validate_equivalent(D: Digraph, arcs: Iterable[Sequence[int]]) -> None:
    arcs = [tuple(a) for a in arcs]
    for a in arcs:
        _need(D.has_arc(*a), f"missing arc {a}")
    _need(_closure(D.n, arcs) == _closure(D.n, D.arcs()), "reachability differs from the input")


def validate_embedding(G: Graph, T: Graph, phi: Mapping[int, int]) -> None:
    _need(set(phi) == set(range(T.n)), "map does not cover the pattern")
    _need(len(set(phi.values())) == T.n, "map is not injective")
    for a, b in T.edges():
        _need(G.has_edge(phi[a], phi[b]), f"pattern edge {a}-{b} not preserved")
