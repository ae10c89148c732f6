"""k-Tree: does the host graph contain the pattern tree as a subgraph?

The pattern is rooted at a leaf r. For an ancestor x of y, C(x, y) is the
part of the pattern strictly between them, and F[x, y][u, v] holds host
vertex sets onto which C(x, y) embeds when x -> u and y -> v. Each such
family is assembled from smaller ones by guessing the image of a small
separator W (found by subtree cutting plus least-common-ancestor closure) and
multiplying the families of the pieces, reducing after every product.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil

from ..graphs import Graph
from ..repfam import WeightedSetFamily, family_product, mask_of
from ..sepcol import UniformReducer
from .common import InputError, SolverResult, TrackingReducer, get_reducer
from .validate import validate_embedding


def _merge(a, b):
    out = dict(a or {})
    out.update(b or {})
    return out


class _Pattern:
    def __init__(self, T: Graph):
        k = T.n
        if k == 0:
            raise InputError("pattern tree is empty")
        if T.m != k - 1:
            raise InputError("pattern is not a tree")
        self.T = T
        self.k = k
        leaves = [v for v in range(k) if T.degree(v) <= 1]
        self.root = leaves[0]
        self.parent = [-1] * k
        self.depth = [0] * k
        order = [self.root]
        seen = {self.root}
        for x in order:
            for y in T.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    self.parent[y] = x
                    self.depth[y] = self.depth[x] + 1
                    order.append(y)
        if len(order) != k:
            raise InputError("pattern is not connected")
        self.children = [[] for _ in range(k)]
        for y in order[1:]:
            self.children[self.parent[y]].append(y)
        self.sub = [None] * k
        for x in reversed(order):
            s = {x}
            for c in self.children[x]:
                s |= self.sub[c]
            self.sub[x] = frozenset(s)
        self.leaves = [v for v in leaves if v != self.root]

    def is_ancestor(self, a: int, b: int) -> bool:
        return b in self.sub[a]

    def lca(self, a: int, b: int) -> int:
        while not self.is_ancestor(a, b):
            a = self.parent[a]
        return a

    def between(self, x: int, y: int) -> frozenset:
        if self.parent[y] == x:
            return frozenset()
        z = y
        while self.parent[z] != x:
            z = self.parent[z]
        return self.sub[z] - self.sub[y]


def _divide(P: _Pattern, x: int, y: int, C: frozenset, c: int) -> frozenset:
    """Separator containing x, y and a vertex of C whose pieces have at most two neighbours."""
    verts = C | {x, y}
    thr = max(1, ceil(len(verts) / c))
    remaining = set(verts)
    W = set()
    while len(remaining) >= thr:
        size = {}
        for v in sorted(remaining, key=lambda v: -P.depth[v]):
            size[v] = 1 + sum(size[ch] for ch in P.children[v] if ch in remaining)
        cands = [v for v in remaining if size[v] >= thr
                 and all(size.get(ch, 0) < thr for ch in P.children[v] if ch in remaining)]
        v = min(cands, key=lambda v: (-P.depth[v], v))
        W.add(v)
        remaining -= P.sub[v]
    W |= {x, y}
    if not (W & C):
        z = y
        while P.parent[z] != x:
            z = P.parent[z]
        W.add(z)
    changed = True
    while changed:
        changed = False
        for a in sorted(W):
            for b in sorted(W):
                w = P.lca(a, b)
                if w not in W:
                    W.add(w)
                    changed = True
    return frozenset(W)


class _Solver:
    def __init__(self, G: Graph, P: _Pattern, R: TrackingReducer, c: int):
        self.G, self.P, self.R, self.c = G, P, R, c
        self.n = G.n
        self.pair: dict[tuple, dict] = {}
        self.star: dict[tuple, dict] = {}
        self.max_family = 0

    def _note(self, F: WeightedSetFamily) -> WeightedSetFamily:
        self.max_family = max(self.max_family, len(F))
        return F

    def pair_fam(self, x: int, y: int) -> dict:
        key = (x, y)
        if key in self.pair:
            return self.pair[key]
        P, G, n, k = self.P, self.G, self.n, self.P.k
        C = P.between(x, y)
        out: dict[tuple, WeightedSetFamily] = {}
        if not C:
            for u, v in G.edges():
                for a, b in ((u, v), (v, u)):
                    out[(a, b)] = WeightedSetFamily(n, [0], [0], payloads=[{}])
            self.pair[key] = out
            return out
        What = _divide(P, x, y, C, self.c)
        W = sorted(What - {x, y}, key=lambda v: (P.depth[v], v))
        factors = self._factors(C, What)
        buckets: dict[tuple, WeightedSetFamily] = {}
        order = [x, y] + W
        g: dict[int, int] = {}

        def alive(f) -> bool:
            if f[0] == "pair":
                return (g[f[1]], g[f[2]]) in self.pair_fam(f[1], f[2])
            return g[f[1]] in self.star_fam(f[1], f[2])

        checks: list[list] = [[] for _ in order]
        for f in factors:
            needed = [f[1], f[2]] if f[0] == "pair" else [f[1]]
            checks[max(order.index(v) for v in needed)].append(f)

        def assign(i: int):
            if i == len(order):
                self._chain(g, (g[x], g[y]), W, factors, buckets, C)
                return
            t = order[i]
            for h in range(n):
                if h in g.values():
                    continue
                g[t] = h
                if all(alive(f) for f in checks[i]):
                    assign(i + 1)
                del g[t]

        assign(0)
        for uv, F in buckets.items():
            F = self.R.reduce(F, k - len(C))
            if len(F):
                out[uv] = self._note(F)
        self.pair[key] = out
        return out

    def _factors(self, C: frozenset, What: frozenset) -> list[tuple]:
        P = self.P
        fs = [("pair", a, b) for a in sorted(What) for b in P.children[a] if b in What]
        rest = C - What
        seen = set()
        for s in sorted(rest):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                v = stack.pop()
                for w in P.T.neighbors(v):
                    if w in rest and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            nbrs = sorted({w for v in comp for w in P.T.neighbors(v) if w not in comp})
            if len(nbrs) == 2:
                a, b = nbrs
                if P.is_ancestor(b, a):
                    a, b = b, a
                fs.append(("pair", a, b))
            else:
                leaf = min(v for v in comp if P.T.degree(v) == 1)
                fs.append(("star", nbrs[0], leaf))
        return fs

    def _chain(self, g: dict, uv: tuple, W: list, factors: list, buckets: dict, C: frozenset) -> None:
        """reduce(... reduce({g(W)} * F1) * F2 ...) for one guess g, added to the (u, v) bucket."""
        n, k = self.n, self.P.k
        cur = WeightedSetFamily(n, [mask_of(g[w] for w in W)], [0], payloads=[{w: g[w] for w in W}])
        for f in factors:
            if f[0] == "pair":
                F = self.pair_fam(f[1], f[2])[(g[f[1]], g[f[2]])]
            else:
                F = self.star_fam(f[1], f[2])[g[f[1]]]
            cur = family_product(cur, F, "min", _merge)
            if not len(cur):
                return
            cur = self.R.reduce(cur, k - cur.set_size)
        bad = (1 << uv[0]) | (1 << uv[1])
        bucket = buckets.get(uv)
        if bucket is None:
            bucket = buckets[uv] = WeightedSetFamily(n, set_size=len(C))
        for m, w, pl in cur.members():
            if not m & bad:
                bucket.add(m, w, pl)

    def star_fam(self, x: int, y: int) -> dict:
        key = (x, y)
        if key in self.star:
            return self.star[key]
        C = self.P.between(x, y)
        per_u: dict[int, WeightedSetFamily] = {}
        for (u, v), F in self.pair_fam(x, y).items():
            acc = per_u.get(u)
            if acc is None:
                acc = per_u[u] = WeightedSetFamily(self.n, set_size=len(C) + 1)
            bit = 1 << v
            for m, w, pl in F.members():
                acc.add(m | bit, w, _merge(pl, {y: v}))
        out = {}
        for u, F in per_u.items():
            F = self.R.reduce(F, self.P.k - len(C) - 1)
            if len(F):
                out[u] = self._note(F)
        self.star[key] = out
        return out


def k_tree(G: Graph, T: Graph, epsilon: Fraction | float = Fraction(1, 4), seed: int = 0, P_conf: int = 40,
           pipeline: str = "default", reducer: UniformReducer | None = None) -> SolverResult:
    """Embedding of the pattern tree T into G as a subgraph, or a NO verdict."""
    if G.directed or T.directed:
        raise InputError("k_tree needs undirected graphs")
    eps = Fraction(epsilon).limit_denominator(1000)
    if not 0 < eps <= 1:
        raise InputError("epsilon must lie in (0, 1]")
    P = _Pattern(T)
    R = reducer if isinstance(reducer, TrackingReducer) else TrackingReducer(get_reducer(seed, P_conf, pipeline, reducer))
    k = P.k
    if k > G.n:
        return SolverResult(False, None, None, R.provenance(), {})
    if k == 1:
        phi = {0: 0}
        return SolverResult(True, phi, None, R.provenance(), {})
    S = _Solver(G, P, R, ceil(1 / eps))
    leaf = P.leaves[0]
    stars = S.star_fam(P.root, leaf)
    stats = {"c": S.c, "pairs": len(S.pair), "max_family": S.max_family}
    for u in sorted(stars):
        _, _, pl = next(iter(stars[u].members()))
        phi = _merge(pl, {P.root: u})
        validate_embedding(G, T, phi)
        return SolverResult(True, dict(sorted(phi.items())), None, R.provenance(), stats)
    return SolverResult(False, None, None, R.provenance(), stats)
