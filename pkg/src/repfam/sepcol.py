"""Separating collections and representative families for uniform matroids.

An n-p-q separating collection is a family F of subsets of range(n) with a
query map chi: for a p-set A, every member of chi(A) contains A, and for every
q-set B disjoint from A some member of chi(A) avoids B.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .ffmat import greedy_order, next_prime
from .repfam import FamilyError, WeightedSetFamily, bits, mask_of

# exhaustive verification runs when C(n,p) * C(n-p,q) stays below this
VERIFY_PAIR_BUDGET = 400_000
# hash families are verified when C(n,k) stays below this
VERIFY_SUBSET_BUDGET = 200_000

PIPELINES = {"default": 0, "full": 1, "explicit": 2}
_MAGIC = b"SEPC"
_HEADER = struct.Struct("<4sBIIIQBQI?")


class CollectionError(ValueError):
    pass


def _derive(seed: int, *tags: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(t) for t in tags]])


def _sub_seed(seed: int, *tags: int) -> int:
    return int(_derive(seed, *tags).generate_state(1, dtype=np.uint64)[0])


def verification_pairs(n: int, p: int, q: int) -> int:
    return math.comb(n, p) * math.comb(max(n - p, 0), q)


def base_size(w: int, p: int, q: int, P_conf: int) -> int:
    """Number of random sets drawn by build_base."""
    if p == 0 or q == 0:
        return 1
    ratio = (p + q) ** (p + q) / (p ** p * q ** q)
    return max(1, math.ceil(ratio * (p + q + 1 + P_conf) * math.log(w)))


def _norm_query(A: Iterable[int], n: int, p: int) -> tuple[int, ...]:
    A = tuple(sorted({int(a) for a in A}))
    if len(A) != p:
        raise CollectionError(f"query set must have exactly {p} elements, got {len(A)}")
    if A and not (0 <= A[0] and A[-1] < n):
        raise CollectionError("query set leaves the universe")
    return A


class SeparatingCollection:
    """Common interface. Members are addressed by opaque hashable ids."""

    n: int
    p: int
    q: int
    provenance: dict

    def query_ids(self, A: tuple[int, ...]) -> Iterator:
        raise NotImplementedError

    def member_mask(self, mid) -> int:
        raise NotImplementedError

    def member_ids(self) -> Iterator:
        raise NotImplementedError

    def __len__(self) -> int:
        raise NotImplementedError

    def query(self, A: Iterable[int]) -> list[frozenset]:
        A = _norm_query(A, self.n, self.p)
        ids = list(self.query_ids(A))
        if not ids:
            return []
        return [frozenset(np.flatnonzero(r).tolist()) for r in self.member_rows(ids)]

    def separates(self, A: Iterable[int], B: Iterable[int]) -> bool:
        A = _norm_query(A, self.n, self.p)
        bm = mask_of(B)
        return any(self.member_mask(i) & bm == 0 for i in self.query_ids(A))

    def masks(self) -> list[int]:
        return [self.member_mask(i) for i in self.member_ids()]

    def member_rows(self, ids: list) -> np.ndarray:
        """Members as a boolean matrix, one row per id."""
        out = np.zeros((len(ids), self.n), dtype=bool)
        for r, i in enumerate(ids):
            out[r, bits(self.member_mask(i))] = True
        return out

    def degree(self, samples: int = 200, seed: int = 0) -> int:
        """Largest |chi(A)| over a sample of p-sets (exact when C(n,p) is small)."""
        if math.comb(self.n, self.p) <= samples:
            sets = combinations(range(self.n), self.p)
        else:
            rng = np.random.default_rng(seed)
            sets = (tuple(sorted(rng.choice(self.n, self.p, replace=False).tolist())) for _ in range(samples))
        return max((sum(1 for _ in self.query_ids(A)) for A in sets), default=0)

    def to_bytes(self) -> bytes:
        ms = self.masks()
        prov = self.provenance
        head = _HEADER.pack(_MAGIC, 1, self.n, self.p, self.q, len(ms),
                            PIPELINES.get(prov.get("pipeline", "explicit"), 2),
                            int(prov.get("seed", 0)) & 0xFFFFFFFFFFFFFFFF,
                            int(prov.get("P_conf", 0)), bool(prov.get("verified", False)))
        width = (self.n + 7) // 8
        body = b"".join(m.to_bytes(width, "little") for m in ms)
        return head + body


class ExplicitCollection(SeparatingCollection):
    """Materialized family with chi(A) = all members containing A."""

    def __init__(self, n: int, p: int, q: int, rows: np.ndarray, provenance: dict | None = None):
        self.n, self.p, self.q = n, p, q
        rows = np.asarray(rows, dtype=bool).reshape(-1, n)
        rows.flags.writeable = False
        self.rows = rows
        self.provenance = dict(provenance or {})
        self._masks = None

    def __len__(self):
        return self.rows.shape[0]

    def _all_masks(self) -> list[int]:
        if self._masks is None:
            packed = np.packbits(self.rows, axis=1, bitorder="little")
            self._masks = [int.from_bytes(r.tobytes(), "little") for r in packed]
        return self._masks

    def member_mask(self, mid) -> int:
        return self._all_masks()[mid]

    def member_ids(self):
        return iter(range(len(self)))

    def masks(self):
        return list(self._all_masks())

    def member_rows(self, ids: list) -> np.ndarray:
        return self.rows[list(ids)]

    def hits(self, A: Sequence[int]) -> np.ndarray:
        if not len(A):
            return np.arange(len(self))
        return np.flatnonzero(self.rows[:, list(A)].all(axis=1))

    def query_ids(self, A):
        return iter(self.hits(A).tolist())

    def separates(self, A, B) -> bool:
        A = _norm_query(A, self.n, self.p)
        ids = self.hits(A)
        B = list(B)
        if not B:
            return ids.size > 0
        return bool((~self.rows[np.ix_(ids, B)].any(axis=1)).any()) if ids.size else False

    @classmethod
    def from_bytes(cls, data: bytes) -> "ExplicitCollection":
        if len(data) < _HEADER.size:
            raise CollectionError("truncated collection header")
        magic, ver, n, p, q, t, tag, seed, pconf, verified = _HEADER.unpack_from(data)
        if magic != _MAGIC or ver != 1:
            raise CollectionError("not a separating-collection file")
        width = (n + 7) // 8
        body = data[_HEADER.size:]
        if len(body) != t * width:
            raise CollectionError("collection body has the wrong length")
        rows = np.zeros((t, n), dtype=bool)
        if t and n:
            raw = np.frombuffer(body, dtype=np.uint8).reshape(t, width)
            rows = np.unpackbits(raw, axis=1, bitorder="little")[:, :n].astype(bool)
        pipeline = {v: k for k, v in PIPELINES.items()}.get(tag, "explicit")
        return cls(n, p, q, rows, {"pipeline": pipeline, "seed": seed, "P_conf": pconf,
                                   "verified": verified, "stage": "loaded"})


# ---------------------------------------------------------------- verification

def find_failures(C: SeparatingCollection, limit: int | None = None) -> list[tuple[tuple, tuple]]:
    """Every (A, B) pair not separated by chi(A), found by exhaustive search.

    B ranges over sets of size min(q, n - p); smaller B are covered by supersets.
    """
    n, p = C.n, C.p
    q = min(C.q, n - p)
    bad = []
    for A in combinations(range(n), p):
        rest = [x for x in range(n) if x not in set(A)]
        Bs = list(combinations(range(len(rest)), q))
        ids = list(C.query_ids(A))
        if not ids:
            bad.extend((A, tuple(rest[i] for i in b)) for b in Bs)
        elif q == 0:
            continue
        else:
            R = C.member_rows(ids)[:, rest].astype(np.int32)
            ind = np.zeros((len(Bs), len(rest)), dtype=np.int32)
            for r, b in enumerate(Bs):
                ind[r, list(b)] = 1
            ok = ((R @ ind.T) == 0).any(axis=0)
            for r in np.flatnonzero(~ok):
                bad.append((A, tuple(rest[i] for i in Bs[r])))
        if limit is not None and len(bad) >= limit:
            return bad[:limit]
    return bad


def sample_failures(C: SeparatingCollection, samples: int, seed: int = 0) -> int:
    """Count unseparated pairs among random (A, B) samples."""
    rng = np.random.default_rng(seed)
    n, p, q = C.n, C.p, min(C.q, C.n - C.p)
    fails = 0
    for _ in range(samples):
        pick = rng.choice(n, p + q, replace=False)
        if not C.separates(pick[:p].tolist(), pick[p:].tolist()):
            fails += 1
    return fails


def _can_verify(n: int, p: int, q: int) -> bool:
    return verification_pairs(n, p, min(q, n - p)) <= VERIFY_PAIR_BUDGET


# ---------------------------------------------------------------- base

def build_base(w: int, p: int, q: int, seed: int = 0, P_conf: int = 40,
               verify: bool | None = None) -> ExplicitCollection:
    """Random w-p-q collection; each element joins a set with probability p/(p+q).

    With ``verify`` (default: when exhaustive search is cheap) every
    unseparated pair (A, B) is repaired by adding the complement of B.
    """
    if min(w, p, q) < 0:
        raise CollectionError("negative parameter")
    if p + q > w:
        raise CollectionError(f"p+q={p + q} exceeds universe size {w}")
    prov = {"stage": "base", "pipeline": "explicit", "w": w, "p": p, "q": q,
            "seed": int(seed), "P_conf": int(P_conf)}
    if p == 0:
        rows = np.zeros((1, w), dtype=bool)
    elif q == 0:
        rows = np.ones((1, w), dtype=bool)
    else:
        t = base_size(w, p, q, P_conf)
        rng = np.random.default_rng(_derive(seed, w, p, q))
        rows = rng.random((t, w)) < p / (p + q)
    C = ExplicitCollection(w, p, q, rows, prov)
    if verify is None:
        verify = _can_verify(w, p, q)
    repaired = 0
    if verify and p and q:
        bad = find_failures(C)
        if bad:
            extra = np.ones((len(bad), w), dtype=bool)
            for r, (_, B) in enumerate(bad):
                extra[r, list(B)] = False
            repaired = len(bad)
            C = ExplicitCollection(w, p, q, np.vstack([rows, extra]), prov)
    C.provenance.update(verified=bool(verify) or p == 0 or q == 0, repaired=repaired, size=len(C))
    return C


# ---------------------------------------------------------------- hashing

@dataclass(frozen=True)
class HashFamily:
    """Maps x -> ((a*x + b) mod prime) mod k**2 for each (a, b)."""

    n: int
    k: int
    prime: int
    params: tuple
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        x = np.arange(self.n, dtype=np.int64)
        tab = np.empty((len(self.params), self.n), dtype=np.int64)
        for i, (a, b) in enumerate(self.params):
            tab[i] = (a * x + b) % self.prime % (self.k * self.k)
        tab.flags.writeable = False
        object.__setattr__(self, "table", tab)

    def __len__(self):
        return len(self.params)

    def image(self, i: int, A: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) for v in self.table[i, list(A)])

    def injective_on(self, i: int, A: Sequence[int]) -> bool:
        img = self.table[i, list(A)]
        return len(np.unique(img)) == len(img)

    def uncovered(self, limit: int | None = None) -> list[tuple[int, ...]]:
        """k-subsets on which no map is injective (exhaustive)."""
        k = min(self.k, self.n)
        out = []
        subsets = np.array(list(combinations(range(self.n), k)), dtype=np.intp).reshape(-1, k)
        if not len(subsets) or k <= 1:
            return out
        for lo in range(0, len(subsets), 20000):
            chunk = subsets[lo:lo + 20000]
            img = np.sort(self.table[:, chunk], axis=2)
            inj = (np.diff(img, axis=2) != 0).all(axis=2).any(axis=0)
            out.extend(tuple(r) for r in chunk[~inj].tolist())
            if limit is not None and len(out) >= limit:
                return out[:limit]
        return out


def hash_family_size(n: int, k: int, P_conf: int) -> int:
    return max(1, math.ceil(k * math.log2(max(n, 1)) + P_conf))


def build_hash_family(n: int, k: int, seed: int = 0, P_conf: int = 40, verify: bool | None = None) -> HashFamily:
    """Random affine maps into range(k*k); k-perfect with probability >= 1 - 2**-P_conf."""
    if k < 1:
        raise CollectionError("k must be positive")
    prime = next_prime(max(n, k * k))
    rng = np.random.default_rng(_derive(seed, n, k, 7))
    t = hash_family_size(n, k, P_conf)
    params = [(int(rng.integers(1, prime)), int(rng.integers(0, prime))) for _ in range(t)]
    H = HashFamily(n, k, prime, tuple(params))
    if verify is None:
        verify = math.comb(n, k) <= VERIFY_SUBSET_BUDGET
    added = 0
    if verify:
        missing = H.uncovered()
        for A in missing:
            if any(H.injective_on(i, A) for i in range(len(H))):
                continue
            while True:
                a, b = int(rng.integers(1, prime)), int(rng.integers(0, prime))
                img = {(a * x + b) % prime % (k * k) for x in A}
                if len(img) == len(A):
                    break
            params.append((a, b))
            added += 1
            H = HashFamily(n, k, prime, tuple(params))
    prov = {"n": n, "k": k, "seed": int(seed), "P_conf": int(P_conf), "size": len(params),
            "verified": bool(verify), "repaired": added}
    return HashFamily(n, k, prime, tuple(params), prov)


# ---------------------------------------------------------------- lift

class LiftedCollection(SeparatingCollection):
    """Members f_i^{-1}(F) for each map f_i and each base member F."""

    def __init__(self, base: SeparatingCollection, H: HashFamily, n: int, provenance: dict | None = None,
                 q: int | None = None):
        p = base.p
        q = base.q if q is None else q
        if q > base.q:
            raise CollectionError("base collection separates fewer elements than requested")
        if base.n != (p + q) ** 2:
            raise CollectionError(f"base universe {base.n} must equal (p+q)^2 = {(p + q) ** 2}")
        if H.k != p + q or H.n != n:
            raise CollectionError("hash family does not match (n, p+q)")
        self.base, self.H = base, H
        self.n, self.p, self.q = n, p, q
        self.provenance = dict(provenance or {})

    def __len__(self):
        return len(self.H) * len(self.base)

    def query_ids(self, A):
        for i in range(len(self.H)):
            img = self.H.image(i, A)
            if len(set(img)) != len(img):
                continue
            for j in self.base.query_ids(tuple(sorted(img))):
                yield (i, j)

    def member_mask(self, mid) -> int:
        i, j = mid
        fm = self.base.member_mask(j)
        tab = self.H.table[i]
        return mask_of(x for x in range(self.n) if fm >> int(tab[x]) & 1)

    def member_ids(self):
        for i in range(len(self.H)):
            for j in self.base.member_ids():
                yield (i, j)

    def member_rows(self, ids: list) -> np.ndarray:
        out = np.zeros((len(ids), self.n), dtype=bool)
        groups: dict = {}
        for r, (i, j) in enumerate(ids):
            groups.setdefault(i, []).append((r, j))
        for i, items in groups.items():
            rs = [r for r, _ in items]
            out[rs] = self.base.member_rows([j for _, j in items])[:, self.H.table[i]]
        return out

    def separates(self, A, B) -> bool:
        A = _norm_query(A, self.n, self.p)
        B = list(B)
        for i in range(len(self.H)):
            img = self.H.image(i, A)
            if len(set(img)) != len(img):
                continue
            fb = set(self.H.image(i, B))
            if fb & set(img):
                continue
            if self.base.separates(sorted(img), sorted(fb)):
                return True
        return False


def lift_universe(base: SeparatingCollection, H: HashFamily, n: int, q: int | None = None) -> LiftedCollection:
    """Pull a (p+q)^2-universe collection back along a (p+q)-perfect hash family."""
    q = base.q if q is None else q
    prov = {"stage": "lift", "n": n, "p": base.p, "q": q, "hash": H.provenance,
            "base": base.provenance,
            "verified": bool(base.provenance.get("verified")) and bool(H.provenance.get("verified"))}
    return LiftedCollection(base, H, n, prov, q)


# ---------------------------------------------------------------- split

def consecutive_partitions(n: int, t: int) -> Iterator[tuple[int, ...]]:
    """Boundaries 0 = b_0 <= b_1 <= ... <= b_t = n, in lexicographic order."""
    for inner in combinations_with_replacement(range(n + 1), t - 1):
        yield (0, *inner, n)


def split_parameters(p: int, q: int) -> tuple[int, int]:
    k = p + q
    s = int(math.floor(math.log2(k) ** 2)) if k > 1 else 1
    s = min(max(s, 1), k)
    return s, math.ceil(k / s)


class SplitCollection(SeparatingCollection):
    """Products of inner members restricted to the parts of a consecutive partition."""

    def __init__(self, inner: dict, n: int, p: int, s: int, t: int, provenance: dict | None = None):
        for ph in range(0, min(s, p) + 1):
            C = inner.get(ph)
            if C is None or C.n != n or C.p != ph or C.q != s - ph:
                raise CollectionError(f"missing or mismatched inner collection for p={ph}")
        self.inner, self.s, self.t = inner, s, t
        self.n, self.p, self.q = n, p, s * t - p
        if self.q < 0:
            raise CollectionError("s*t must be at least p")
        self.provenance = dict(provenance or {})

    def __len__(self):
        per = 0
        for Z in self._tuples():
            per += math.prod(len(self.inner[z]) for z in Z)
        return math.comb(self.n + self.t - 1, self.t - 1) * per

    def _tuples(self):
        for Z in product(range(min(self.s, self.p) + 1), repeat=self.t):
            if sum(Z) == self.p:
                yield Z

    def query_ids(self, A):
        A = list(A)
        for bnd in consecutive_partitions(self.n, self.t):
            parts = [tuple(a for a in A if bnd[i] <= a < bnd[i + 1]) for i in range(self.t)]
            if any(len(x) > self.s for x in parts):
                continue
            choices = [list(self.inner[len(x)].query_ids(x)) for x in parts]
            for combo in product(*choices):
                yield (bnd, tuple(zip((len(x) for x in parts), combo)))

    def member_rows(self, ids: list) -> np.ndarray:
        out = np.zeros((len(ids), self.n), dtype=bool)
        cache: dict = {}
        for r, (bnd, picks) in enumerate(ids):
            for i, key in enumerate(picks):
                row = cache.get(key)
                if row is None:
                    row = cache[key] = self.inner[key[0]].member_rows([key[1]])[0]
                out[r, bnd[i]:bnd[i + 1]] = row[bnd[i]:bnd[i + 1]]
        return out

    def member_mask(self, mid) -> int:
        bnd, picks = mid
        m = 0
        for i, (ph, j) in enumerate(picks):
            part = ((1 << bnd[i + 1]) - 1) ^ ((1 << bnd[i]) - 1)
            m |= self.inner[ph].member_mask(j) & part
        return m

    def member_ids(self):
        for bnd in consecutive_partitions(self.n, self.t):
            for Z in self._tuples():
                for combo in product(*[list(self.inner[z].member_ids()) for z in Z]):
                    yield (bnd, tuple(zip(Z, combo)))


def split_compose(stage, n: int, p: int, q: int, s: int | None = None) -> SplitCollection:
    """Split an n-p-q instance into t consecutive parts holding at most s elements each.

    ``stage`` is either a callable (n, p_hat, q_hat) -> collection or a dict
    mapping p_hat to an n-p_hat-(s-p_hat) collection.
    """
    if s is None:
        s, t = split_parameters(p, q)
    else:
        if s < 1:
            raise CollectionError("s must be positive")
        t = math.ceil((p + q) / s)
    if s > n:
        raise CollectionError("part capacity s exceeds the universe")
    if callable(stage):
        inner = {ph: stage(n, ph, s - ph) for ph in range(0, min(s, p) + 1)}
    else:
        inner = dict(stage)
    verified = all(bool(C.provenance.get("verified")) for C in inner.values())
    prov = {"stage": "split", "n": n, "p": p, "q": s * t - p, "s": s, "t": t, "verified": verified}
    return SplitCollection(inner, n, p, s, t, prov)


# ---------------------------------------------------------------- pipelines

def build(n: int, p: int, q: int, seed: int = 0, P_conf: int = 40, pipeline: str = "default",
          verify: bool | None = None) -> SeparatingCollection:
    """Build an n-p-q separating collection.

    ``default``: a base collection on min(n, (p+q)^2) elements, lifted to n
    when needed. ``full``: base, lift, split, lift, split, lift.
    """
    if min(n, p, q) < 0:
        raise CollectionError("negative parameter")
    if p + q > n:
        raise CollectionError(f"p+q={p + q} exceeds n={n}")
    if pipeline not in ("default", "full"):
        raise CollectionError(f"unknown pipeline {pipeline!r}")
    memo: dict = {}

    def base(w, pp, qq):
        key = ("b", w, pp, qq)
        if key not in memo:
            memo[key] = build_base(w, pp, qq, _sub_seed(seed, 1, w, pp, qq), P_conf, verify)
        return memo[key]

    def lifted(inner_stage, tag):
        def make(nn, pp, qq):
            k = pp + qq
            if nn <= k * k or pp == 0 or qq == 0:
                return inner_stage(nn, pp, qq)
            key = ("l", tag, nn, pp, qq)
            if key not in memo:
                H = build_hash_family(nn, k, _sub_seed(seed, 2, tag, nn, k), P_conf,
                                      None if verify is None else verify)
                memo[key] = lift_universe(inner_stage(k * k, pp, qq), H, nn, qq)
            return memo[key]
        return make

    def split(inner_stage, tag):
        def make(nn, pp, qq):
            s, t = split_parameters(pp, qq)
            if t == 1 or pp == 0 or qq == 0:
                return inner_stage(nn, pp, qq)
            key = ("s", tag, nn, pp, qq)
            if key not in memo:
                memo[key] = split_compose(inner_stage, nn, pp, qq, s)
            return memo[key]
        return make

    if pipeline == "default":
        maker = lifted(base, 0)
    else:
        maker = lifted(split(lifted(split(lifted(base, 0), 1), 2), 3), 4)
    C = maker(n, p, q)
    C.provenance.update(pipeline=pipeline, seed=int(seed), P_conf=int(P_conf))
    return C


# ---------------------------------------------------------------- representative families

def _fits(C: SeparatingCollection, n: int, p: int, q: int) -> bool:
    return C.n == n and C.p == p and (C.q == q or (C.q > q and n - p >= C.q))


def rep_uniform(S: WeightedSetFamily, q: int, sense: str | None = None,
                collection: SeparatingCollection | None = None, seed: int = 0, P_conf: int = 40,
                pipeline: str = "default", verify: bool | None = None) -> WeightedSetFamily:
    """q-representative subfamily of S in the uniform matroid U_{n,p+q}.

    Sets are scanned from best to worst weight; each keeps the first unused
    member of chi(A), and is dropped if all of chi(A) is used.
    """
    sense = sense or S.sense
    n, p = len(S.universe), S.set_size or 0
    if q < 0:
        raise FamilyError("q must be non-negative")
    q = min(q, n - p)
    if not len(S):
        return WeightedSetFamily(S.universe, set_size=p, sense=sense)
    if collection is None:
        collection = build(n, p, q, seed, P_conf, pipeline, verify)
    elif not _fits(collection, n, p, q):
        raise CollectionError("collection parameters do not match the family")
    masks, weights = S.masks, S.weights
    used = set()
    keep = []
    for i in greedy_order(weights, sense):
        for fid in collection.query_ids(tuple(bits(masks[i]))):
            if fid not in used:
                used.add(fid)
                keep.append(i)
                break
    out = WeightedSetFamily(S.universe, set_size=p, sense=sense)
    payloads = S.payloads
    for i in sorted(keep):
        out.add(masks[i], weights[i], payloads[i])
    return out


def rep_uniform_naive(S: WeightedSetFamily, q: int, collection: SeparatingCollection | None = None,
                      seed: int = 0, P_conf: int = 40, verify: bool | None = None) -> WeightedSetFamily:
    """Unweighted marking over the whole member list rather than chi(A)."""
    n, p = len(S.universe), S.set_size or 0
    q = min(q, n - p)
    if not len(S):
        return WeightedSetFamily(S.universe, set_size=p, sense=S.sense)
    if collection is None:
        collection = build(n, p, q, seed, P_conf, "default", verify)
    elif not _fits(collection, n, p, q):
        raise CollectionError("collection parameters do not match the family")
    members = list(zip(collection.member_ids(), collection.masks()))
    used = set()
    keep = []
    for i, A in enumerate(S.masks):
        for fid, fm in members:
            if fid not in used and A & fm == A:
                used.add(fid)
                keep.append(i)
                break
    return S.subfamily(keep)


@dataclass
class UniformReducer:
    """Caches one collection per (n, p, q) and reduces families with it.

    When exhaustive verification is affordable the collection is drawn at the
    smallest size (P_conf = 0) and verified, so reductions are exact. Larger
    parameters fall back to Monte Carlo collections at the given P_conf.
    """

    seed: int = 0
    P_conf: int = 40
    pipeline: str = "default"
    verified_only: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def collection(self, n: int, p: int, q: int) -> SeparatingCollection:
        key = (n, p, q)
        C = self._cache.get(key)
        if C is None:
            if _can_verify(n, p, q):
                C = build(n, p, q, self.seed, 0, self.pipeline, verify=True)
            elif self.verified_only:
                raise CollectionError(f"cannot verify an {n}-{p}-{q} collection exhaustively")
            else:
                C = build(n, p, q, self.seed, self.P_conf, self.pipeline)
            self._cache[key] = C
        return C

    def reduce(self, S: WeightedSetFamily, q: int, sense: str | None = None) -> WeightedSetFamily:
        n, p = len(S.universe), S.set_size or 0
        q = max(0, min(q, n - p))
        if not len(S):
            return S
        return rep_uniform(S, q, sense, collection=self.collection(n, p, q))

    def provenance(self) -> dict:
        cols = [self._cache[k] for k in sorted(self._cache)]
        return {
            "seed": self.seed,
            "P_conf": self.P_conf,
            "pipeline": self.pipeline,
            "collections": len(cols),
            "monte_carlo": not all(bool(C.provenance.get("verified")) for C in cols),
        }
