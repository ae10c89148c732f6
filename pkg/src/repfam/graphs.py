"""Graph containers, file formats, tree decompositions and classical subroutines."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class DecompositionError(ValueError):
    pass


def _check_vertex(v, n: int) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
        raise ValueError(f"vertex {v!r} outside 0..{n - 1}")
    return v


def _check_weight(w) -> int:
    w = int(w)
    if w < 0:
        raise ValueError("weights must be non-negative")
    return w


class Graph:
    """Simple undirected graph on 0..n-1 with non-negative integer edge weights.

    Parallel edges collapse to the lightest one; self-loops are dropped.
    """

    directed = False

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), weights: Iterable[int] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self._adj: list[dict[int, int]] = [dict() for _ in range(n)]
        edges = [tuple(e) for e in edges]
        weights = [1] * len(edges) if weights is None else [_check_weight(w) for w in weights]
        if len(weights) != len(edges):
            raise ValueError("one weight per edge required")
        for (u, v), w in zip(edges, weights):
            self._add(u, v, w)

    def _add(self, u: int, v: int, w: int) -> None:
        _check_vertex(u, self.n)
        _check_vertex(v, self.n)
        if u == v:
            warnings.warn(f"dropping self-loop at vertex {u}")
            return
        old = self._adj[u].get(v)
        if old is None or w < old:
            self._adj[u][v] = w
            self._adj[v][u] = w

    @property
    def m(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def weighted_edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, self._adj[u][v]) for u, v in self.edges()]

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    in_neighbors = neighbors
    out_neighbors = neighbors

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    has_arc = has_edge

    def weight(self, u: int, v: int) -> int:
        return self._adj[u][v]

    def add_universal_vertex(self, weight: int = 0) -> "Graph":
        """Copy with a new vertex n adjacent to everything."""
        es = self.weighted_edges()
        return Graph(self.n + 1, [(u, v) for u, v, _ in es] + [(self.n, v) for v in range(self.n)],
                     [w for *_, w in es] + [weight] * self.n)

    def __eq__(self, other):
        return isinstance(other, Graph) and not isinstance(other, Digraph) and \
            self.n == other.n and self.weighted_edges() == other.weighted_edges()

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class Digraph:
    """Simple directed graph on 0..n-1; a 2-cycle is two distinct arcs."""

    directed = True

    def __init__(self, n: int, arcs: Iterable[Sequence[int]] = (), weights: Iterable[int] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self._out: list[dict[int, int]] = [dict() for _ in range(n)]
        self._in: list[dict[int, int]] = [dict() for _ in range(n)]
        arcs = [tuple(a) for a in arcs]
        weights = [1] * len(arcs) if weights is None else [_check_weight(w) for w in weights]
        if len(weights) != len(arcs):
            raise ValueError("one weight per arc required")
        for (u, v), w in zip(arcs, weights):
            self._add(u, v, w)

    def _add(self, u: int, v: int, w: int) -> None:
        _check_vertex(u, self.n)
        _check_vertex(v, self.n)
        if u == v:
            warnings.warn(f"dropping self-loop at vertex {u}")
            return
        old = self._out[u].get(v)
        if old is None or w < old:
            self._out[u][v] = w
            self._in[v][u] = w

    @property
    def m(self) -> int:
        return sum(len(a) for a in self._out)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self._out[u])]

    edges = arcs

    def weighted_arcs(self) -> list[tuple[int, int, int]]:
        return [(u, v, self._out[u][v]) for u, v in self.arcs()]

    weighted_edges = weighted_arcs

    def out_neighbors(self, v: int) -> list[int]:
        return sorted(self._out[v])

    def in_neighbors(self, v: int) -> list[int]:
        return sorted(self._in[v])

    def has_arc(self, u: int, v: int) -> bool:
        return v in self._out[u]

    has_edge = has_arc

    def weight(self, u: int, v: int) -> int:
        return self._out[u][v]

    def reverse(self) -> "Digraph":
        wa = self.weighted_arcs()
        return Digraph(self.n, [(v, u) for u, v, _ in wa], [w for *_, w in wa])

    def induced(self, vertices: Sequence[int]) -> tuple["Digraph", list[int]]:
        """Induced subdigraph on ``vertices`` (relabelled 0..k-1) and the label map."""
        vs = sorted(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        wa = [(pos[u], pos[v], w) for u, v, w in self.weighted_arcs() if u in pos and v in pos]
        return Digraph(len(vs), [(u, v) for u, v, _ in wa], [w for *_, w in wa]), vs

    def add_source_vertex(self, weight: int = 0) -> "Digraph":
        """Copy with a new vertex n and arcs from it to every vertex."""
        wa = self.weighted_arcs()
        return Digraph(self.n + 1, [(u, v) for u, v, _ in wa] + [(self.n, v) for v in range(self.n)],
                       [w for *_, w in wa] + [weight] * self.n)

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.weighted_arcs() == other.weighted_arcs()

    def __repr__(self):
        return f"Digraph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------- file formats

def _lines(data) -> list[tuple[int, list[str]]]:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(1, f"input is not UTF-8 text ({exc.reason})") from None
    out = []
    for i, raw in enumerate(data.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] in ("c", "%") or tok[0].startswith("c"):
            continue
        out.append((i, tok))
    return out


def _int(tok: str, line: int, what: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(line, f"{what} {tok!r} is not an integer") from None
    return v


_HEADER_KINDS = {"tw": ("pace_gr", False), "edge": ("dimacs", False), "col": ("dimacs", False),
                 "arc": ("dimacs", True), "sp": ("dimacs", True)}


def parse_graph(data, format: str = "auto", directed: bool | None = None) -> Graph | Digraph:
    """Read a PACE ``.gr`` or DIMACS graph; ids in the file are 1-based.

    ``p tw`` / ``p edge`` headers give undirected graphs and ``p arc`` /
    ``p sp`` give digraphs. ``directed=True`` reads every edge line as an arc
    u -> v regardless of the header. An optional third number on an edge line
    is its weight; missing weights are 1.
    """
    rows = _lines(data)
    if not rows or rows[0][1][0] != "p":
        raise ParseError(rows[0][0] if rows else 1, "missing 'p' header line")
    line, tok = rows[0]
    if len(tok) != 4:
        raise ParseError(line, "header must be 'p <kind> <n> <m>'")
    kind = tok[1].lower()
    if kind not in _HEADER_KINDS:
        raise ParseError(line, f"unknown graph kind {tok[1]!r}")
    fmt, hdr_directed = _HEADER_KINDS[kind]
    if format not in ("auto", fmt):
        raise ParseError(line, f"header kind {tok[1]!r} is not {format} format")
    n, m = _int(tok[2], line, "vertex count"), _int(tok[3], line, "edge count")
    if n < 0 or m < 0:
        raise ParseError(line, "negative count in header")
    is_directed = hdr_directed if directed is None else directed
    pairs, weights = [], []
    for line, tok in rows[1:]:
        if fmt == "dimacs":
            if tok[0] not in ("e", "a"):
                raise ParseError(line, f"expected an 'e' or 'a' line, got {tok[0]!r}")
            tok = tok[1:]
        if len(tok) not in (2, 3):
            raise ParseError(line, "edge line needs two endpoints and an optional weight")
        u, v = _int(tok[0], line, "vertex"), _int(tok[1], line, "vertex")
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(line, f"vertex id outside 1..{n}")
        w = _int(tok[2], line, "weight") if len(tok) == 3 else 1
        if w < 0:
            raise ParseError(line, "negative weight")
        pairs.append((u - 1, v - 1))
        weights.append(w)
    if len(pairs) != m:
        raise ParseError(rows[0][0], f"header announces {m} edges, found {len(pairs)}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        loops = sum(1 for u, v in pairs if u == v)
        G = (Digraph if is_directed else Graph)(n, pairs, weights)
    if loops:
        warnings.warn(f"dropped {loops} self-loop(s)")
    return G


def emit_graph(G: Graph | Digraph, format: str = "pace_gr") -> str:
    """Write G in PACE ``.gr`` or DIMACS form; weights appear only if some differ from 1."""
    es = G.weighted_edges()
    show_w = any(w != 1 for *_, w in es)
    if format == "pace_gr":
        if G.directed:
            raise ValueError("PACE .gr is undirected; use DIMACS for digraphs")
        head, prefix = f"p tw {G.n} {len(es)}", ""
    elif format == "dimacs":
        head = f"p {'arc' if G.directed else 'edge'} {G.n} {len(es)}"
        prefix = "a " if G.directed else "e "
    else:
        raise ValueError(f"unknown format {format!r}")
    out = [head]
    for u, v, w in es:
        out.append(f"{prefix}{u + 1} {v + 1}" + (f" {w}" if show_w else ""))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- tree decompositions

@dataclass
class TreeDecomposition:
    bags: list[frozenset]
    edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in self.bags]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]

    def validate(self, G: Graph | Digraph | None = None, n: int | None = None) -> None:
        """Raise DecompositionError unless the three axioms hold and the tree is a tree."""
        N = len(self.bags)
        if N == 0:
            raise DecompositionError("decomposition has no bags")
        if len(self.edges) != N - 1:
            raise DecompositionError("decomposition tree must have exactly bags-1 edges")
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != N:
            raise DecompositionError("decomposition tree is disconnected")
        n = G.n if G is not None else n
        if n is not None:
            covered = set().union(*self.bags)
            for v in range(n):
                if v not in covered:
                    raise DecompositionError(f"vertex {v} is in no bag")
            if any(not 0 <= v < n for v in covered):
                raise DecompositionError("bag holds an unknown vertex")
        if G is not None:
            for u, v in G.edges():
                if not any(u in b and v in b for b in self.bags):
                    raise DecompositionError(f"edge ({u},{v}) is in no bag")
        for v in set().union(*self.bags):
            holders = [i for i, b in enumerate(self.bags) if v in b]
            hs = set(holders)
            seen = {holders[0]}
            stack = [holders[0]]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in hs and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(holders):
                raise DecompositionError(f"bags containing vertex {v} are not connected")


def parse_td(data, n: int | None = None) -> TreeDecomposition:
    """Read a PACE ``.td`` file (1-based bag and vertex ids)."""
    rows = _lines(data)
    if not rows or rows[0][1][0] != "s":
        raise ParseError(rows[0][0] if rows else 1, "missing 's td' header line")
    line, tok = rows[0]
    if len(tok) != 5 or tok[1] != "td":
        raise ParseError(line, "header must be 's td <bags> <max bag size> <vertices>'")
    nb, size, nv = (_int(t, line, "header field") for t in tok[2:])
    if min(nb, size, nv) < 0:
        raise ParseError(line, "negative header field")
    if n is not None and nv != n:
        raise ParseError(line, f"decomposition is for {nv} vertices, graph has {n}")
    bags: list[frozenset | None] = [None] * nb
    edges = []
    for line, tok in rows[1:]:
        if tok[0] == "b":
            if len(tok) < 2:
                raise ParseError(line, "bag line needs an id")
            i = _int(tok[1], line, "bag id")
            if not 1 <= i <= nb:
                raise ParseError(line, f"bag id outside 1..{nb}")
            if bags[i - 1] is not None:
                raise ParseError(line, f"bag {i} defined twice")
            vs = [_int(t, line, "vertex") for t in tok[2:]]
            if any(not 1 <= v <= nv for v in vs):
                raise ParseError(line, f"bag holds a vertex outside 1..{nv}")
            bags[i - 1] = frozenset(v - 1 for v in vs)
        else:
            if len(tok) != 2:
                raise ParseError(line, "tree edge line needs two bag ids")
            a, b = _int(tok[0], line, "bag id"), _int(tok[1], line, "bag id")
            if not (1 <= a <= nb and 1 <= b <= nb):
                raise ParseError(line, "tree edge names an unknown bag")
            edges.append((a - 1, b - 1))
    for i, b in enumerate(bags):
        if b is None:
            raise ParseError(rows[0][0], f"bag {i + 1} missing")
    td = TreeDecomposition(list(bags), edges)
    if td.width + 1 != size and nb:
        raise ParseError(rows[0][0], f"header bag size {size} but largest bag has {td.width + 1}")
    try:
        td.validate(n=nv)
    except DecompositionError as exc:
        raise ParseError(rows[0][0], str(exc)) from None
    return td


def emit_td(td: TreeDecomposition, n: int) -> str:
    out = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, b in enumerate(td.bags):
        out.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(b)]))
    for a, b in td.edges:
        out.append(f"{a + 1} {b + 1}")
    return "\n".join(out) + "\n"


@dataclass
class NiceTreeDecomposition:
    """Rooted nice decomposition; node ids are a bottom-up order (children first)."""

    kinds: list[str]
    bags: list[frozenset]
    children: list[tuple[int, ...]]
    vertex: list[int | None]
    root: int

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def __len__(self):
        return len(self.kinds)

    def as_decomposition(self) -> TreeDecomposition:
        edges = [(c, t) for t, ch in enumerate(self.children) for c in ch]
        return TreeDecomposition(list(self.bags), edges)

    def validate(self, G: Graph | Digraph | None = None) -> None:
        self.as_decomposition().validate(G)
        if self.bags[self.root]:
            raise DecompositionError("root bag must be empty")
        for t, kind in enumerate(self.kinds):
            ch, bag = self.children[t], self.bags[t]
            if any(c >= t for c in ch):
                raise DecompositionError("node ids must list children first")
            if kind == "base":
                ok = not ch and not bag and t != self.root
            elif kind == "introduce":
                ok = len(ch) == 1 and bag > self.bags[ch[0]] and len(bag) == len(self.bags[ch[0]]) + 1 \
                    and bag - self.bags[ch[0]] == {self.vertex[t]}
            elif kind == "forget":
                ok = len(ch) == 1 and bag < self.bags[ch[0]] and len(bag) == len(self.bags[ch[0]]) - 1 \
                    and self.bags[ch[0]] - bag == {self.vertex[t]}
            elif kind == "join":
                ok = len(ch) == 2 and self.bags[ch[0]] == bag == self.bags[ch[1]]
            else:
                ok = False
            if not ok:
                raise DecompositionError(f"node {t} violates the {kind} rule")


def niceify(td: TreeDecomposition, root: int = 0) -> NiceTreeDecomposition:
    """Convert to nice form with the same width and an empty root bag."""
    td.validate()
    adj = td.adjacency()
    kinds: list[str] = []
    bags: list[frozenset] = []
    children: list[tuple[int, ...]] = []
    vertex: list[int | None] = []

    def new(kind, bag, ch, v=None):
        kinds.append(kind)
        bags.append(frozenset(bag))
        children.append(tuple(ch))
        vertex.append(v)
        return len(kinds) - 1

    def adapt(top: int, target: frozenset) -> int:
        cur = bags[top]
        for v in sorted(cur - target):
            cur = cur - {v}
            top = new("forget", cur, [top], v)
        for v in sorted(target - cur):
            cur = cur | {v}
            top = new("introduce", cur, [top], v)
        return top

    parent = {root: None}
    order = [root]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    top_of: dict[int, int] = {}
    for x in reversed(order):
        B = td.bags[x]
        tops = [adapt(top_of[c], B) for c in adj[x] if parent.get(c) == x and c != parent[x]]
        if not tops:
            tops = [adapt(new("base", (), []), B)]
        acc = tops[0]
        for other in tops[1:]:
            acc = new("join", B, [acc, other])
        top_of[x] = acc
    r = adapt(top_of[root], frozenset())
    if kinds[r] == "base":
        # the whole graph is empty; keep a forget-free single node
        pass
    return NiceTreeDecomposition(kinds, bags, children, vertex, r)


# ---------------------------------------------------------------- digraph algorithms

def scc(D: Digraph) -> list[list[int]]:
    """Strongly connected components (Tarjan), each sorted, listed by smallest vertex."""
    n = D.n
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for s in range(n):
        if index[s] >= 0:
            continue
        work = [(s, iter(D.out_neighbors(s)))]
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on[s] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = True
                    work.append((w, iter(D.out_neighbors(w))))
                    advanced = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return sorted(comps)


def is_strong(D: Digraph) -> bool:
    return D.n <= 1 or len(scc(D)) == 1


def reachable_from(D: Digraph | Graph, s: int, avoid: Iterable[int] = ()) -> list[int | None]:
    """BFS parent pointers from s (parent[s] = s); avoided vertices are never entered."""
    from collections import deque
    parent: list[int | None] = [None] * D.n
    blocked = set(avoid)
    parent[s] = s
    dq = deque([s])
    while dq:
        x = dq.popleft()
        for y in D.out_neighbors(x):
            if parent[y] is None and y not in blocked:
                parent[y] = x
                dq.append(y)
    return parent


@dataclass
class DfsOutcome:
    path: list[int] | None
    parent: list[int] | None
    depth: list[int] | None


def dfs_path_or_shallow(G: Graph, k: int) -> DfsOutcome:
    """DFS that stops at the first root path with k edges.

    Otherwise every DFS tree has depth below k and, since non-tree edges join
    ancestors to descendants, the graph has fewer than k*n edges.
    """
    n = G.n
    parent: list[int] = [-1] * n
    depth = [-1] * n
    for r in range(n):
        if depth[r] >= 0:
            continue
        depth[r] = 0
        if k <= 0:
            return DfsOutcome([r], None, None)
        work = [(r, iter(G.neighbors(r)))]
        while work:
            v, it = work[-1]
            for w in it:
                if depth[w] < 0:
                    depth[w] = depth[v] + 1
                    parent[w] = v
                    if depth[w] >= k:
                        path = [w]
                        while parent[path[-1]] >= 0:
                            path.append(parent[path[-1]])
                        return DfsOutcome(path[::-1], None, None)
                    work.append((w, iter(G.neighbors(w))))
                    break
            else:
                work.pop()
    return DfsOutcome(None, parent, depth)


def _edmonds(n: int, root: int, arcs: list[tuple[int, int, int]]) -> list[int] | None:
    """Indices into ``arcs`` of a minimum out-branching rooted at ``root``."""
    best: list[int | None] = [None] * n
    for i, (u, v, w) in enumerate(arcs):
        if v != root and u != v and (best[v] is None or w < arcs[best[v]][2]):
            best[v] = i
    if any(best[v] is None for v in range(n) if v != root):
        return None
    comp = [-1] * n
    mark = [-1] * n
    ncyc = 0
    for v in range(n):
        x = v
        while x != root and mark[x] == -1 and comp[x] == -1:
            mark[x] = v
            x = arcs[best[x]][0]
        if x != root and mark[x] == v and comp[x] == -1:
            y = x
            while True:
                comp[y] = ncyc
                y = arcs[best[y]][0]
                if y == x:
                    break
            ncyc += 1
    if ncyc == 0:
        return sorted(best[v] for v in range(n) if v != root)
    cycles = ncyc
    for v in range(n):
        if comp[v] == -1:
            comp[v] = ncyc
            ncyc += 1
    sub, origin = [], []
    for i, (u, v, w) in enumerate(arcs):
        cu, cv = comp[u], comp[v]
        if cu != cv:
            nw = w - arcs[best[v]][2] if comp[v] < cycles else w
            sub.append((cu, cv, nw))
            origin.append(i)
    picked = _edmonds(ncyc, comp[root], sub)
    if picked is None:
        return None
    chosen = [origin[j] for j in picked]
    entered = {}
    for i in chosen:
        v = arcs[i][1]
        if comp[v] < cycles:
            entered[comp[v]] = v
    for v in range(n):
        if comp[v] < cycles and entered.get(comp[v]) != v:
            chosen.append(best[v])
    return sorted(chosen)


def min_cost_arborescence(D: Digraph, root: int, weights: Callable[[int, int], int] | dict | None = None,
                          direction: str = "out") -> tuple[int, list[tuple[int, int]]] | None:
    """Minimum spanning out-branching (or in-branching) at ``root``, or None if none exists.

    ``weights`` maps an arc (u, v) to its cost; by default the digraph's own weights.
    """
    if direction not in ("out", "in"):
        raise ValueError("direction must be 'out' or 'in'")
    if weights is None:
        cost = D.weight
    elif callable(weights):
        cost = weights
    else:
        cost = lambda u, v: weights[(u, v)]  # noqa: E731
    arcs = D.arcs()
    if direction == "out":
        work = [(u, v, int(cost(u, v))) for u, v in arcs]
    else:
        work = [(v, u, int(cost(u, v))) for u, v in arcs]
    if D.n == 0:
        return 0, []
    picked = _edmonds(D.n, root, work)
    if picked is None:
        return None
    chosen = sorted(arcs[i] for i in picked)
    return sum(work[i][2] for i in picked), chosen


# ---------------------------------------------------------------- output

def solution_json(**fields) -> str:
    """Deterministic JSON: vertex/edge lists sorted, keys sorted."""
    out = {"schema": 1}
    for k, v in fields.items():
        if k in ("vertices", "terminals") and v is not None:
            v = sorted(v)
        elif k in ("edges", "arcs") and v is not None:
            v = sorted([list(e) for e in v])
        out[k] = v
    return json.dumps(out, sort_keys=True, separators=(",", ":"))
