import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from repfam.oracle import brute_rep_check
from repfam.repfam import WeightedSetFamily
from repfam.sepcol import (
    CollectionError,
    ExplicitCollection,
    UniformReducer,
    base_size,
    build,
    build_base,
    build_hash_family,
    consecutive_partitions,
    find_failures,
    hash_family_size,
    lift_universe,
    rep_uniform,
    rep_uniform_naive,
    sample_failures,
    split_compose,
)


def random_family(rng, n, p, t, wmax=9):
    pool = list(combinations(range(n), p))
    sets = rng.sample(pool, min(t, len(pool)))
    return WeightedSetFamily(n, sets, [rng.randint(0, wmax) for _ in sets], set_size=p)


class TestBase:
    def test_p_zero(self):
        C = build_base(5, 0, 3, seed=1)
        assert C.query([]) == [frozenset()]
        assert not find_failures(C)

    def test_q_zero(self):
        C = build_base(6, 3, 0, seed=1)
        assert len(C) == 1
        for A in combinations(range(6), 3):
            assert C.query(A)

    def test_verified_8_2_2(self):
        C = build_base(8, 2, 2, seed=13, P_conf=0)
        assert C.provenance["verified"]
        assert find_failures(C) == []

    def test_size_formula(self):
        C = build_base(16, 2, 2, seed=0, P_conf=10, verify=False)
        assert len(C) == base_size(16, 2, 2, 10)
        assert base_size(16, 2, 2, 10) == math.ceil(16 * 15 * math.log(16))

    def test_too_large(self):
        with pytest.raises(CollectionError):
            build_base(3, 2, 2)

    def test_roundtrip_bytes(self):
        C = build_base(9, 2, 3, seed=4, P_conf=2)
        D = ExplicitCollection.from_bytes(C.to_bytes())
        assert D.masks() == C.masks()
        assert (D.n, D.p, D.q) == (9, 2, 3)


class TestHash:
    def test_k1(self):
        H = build_hash_family(7, 1, seed=0)
        assert all(H.injective_on(0, [x]) for x in range(7))

    def test_perfect_10_3(self):
        H = build_hash_family(10, 3, seed=5)
        assert H.uncovered() == []
        for A in combinations(range(10), 3):
            assert any(H.injective_on(i, A) for i in range(len(H)))

    def test_size_formula(self):
        H = build_hash_family(10, 3, seed=5, P_conf=40, verify=False)
        assert len(H) == hash_family_size(10, 3, 40) == math.ceil(3 * math.log2(10) + 40)


class TestLift:
    def test_identity_like(self):
        base = build_base(16, 2, 2, seed=2, P_conf=0)
        H = build_hash_family(16, 4, seed=0, P_conf=0, verify=False)
        # replace with the identity map a=1, b=0 over a prime above 16
        from repfam.sepcol import HashFamily
        ident = HashFamily(16, 4, 17, ((1, 0),), {"verified": True})
        L = lift_universe(base, ident, 16)
        assert L.masks() == base.masks()
        assert H is not None

    def test_exhaustive_12(self):
        base = build_base(16, 2, 2, seed=3, P_conf=0)
        H = build_hash_family(12, 4, seed=3, P_conf=0)
        L = lift_universe(base, H, 12)
        assert L.provenance["verified"]
        assert find_failures(L) == []

    def test_property_a(self):
        C = build(40, 2, 3, seed=8, P_conf=5)
        rng = random.Random(0)
        for _ in range(1000):
            A = sorted(rng.sample(range(40), 2))
            rows = C.member_rows(list(C.query_ids(tuple(A))))
            assert rows[:, A].all()
        assert set(A) <= C.query(A)[0]

    def test_wrong_universe(self):
        base = build_base(10, 2, 2, seed=0)
        H = build_hash_family(12, 4, seed=0)
        with pytest.raises(CollectionError):
            lift_universe(base, H, 12)


class TestSplit:
    def test_partition_count(self):
        parts = list(consecutive_partitions(5, 2))
        assert len(parts) == math.comb(6, 1) == 6
        assert parts == sorted(parts)

    def test_exhaustive_9(self):
        stage = lambda n, p, q: build_base(n, p, q, seed=p, P_conf=0)
        C = split_compose(stage, 9, 2, 2, s=2)
        assert (C.s, C.t) == (2, 2)
        assert find_failures(C) == []

    def test_single_part(self):
        stage = lambda n, p, q: build_base(n, p, q, seed=1, P_conf=0)
        C = split_compose(stage, 7, 2, 2, s=4)
        inner = build_base(7, 2, 2, seed=1, P_conf=0)
        assert C.t == 1
        assert sorted(C.masks()) == sorted(inner.masks())


class TestBuild:
    def test_default_10_2_3(self):
        C = build(10, 2, 3, seed=1, P_conf=0, verify=True)
        assert find_failures(C) == []

    def test_degenerate(self):
        assert build(6, 0, 2).query([]) == [frozenset()]
        assert len(build(6, 2, 0)) == 1

    def test_size_near_formula(self):
        for seed in range(3):
            C = build(30, 2, 2, seed=seed, P_conf=5, verify=False)
            t = base_size(16, 2, 2, 5) * hash_family_size(30, 4, 5)
            assert len(C) <= 4 * t

    def test_full_pipeline_verified(self):
        C = build(12, 2, 2, seed=2, P_conf=0, pipeline="full", verify=True)
        assert find_failures(C) == []

    def test_monte_carlo_sampled(self):
        C = build(30, 3, 3, seed=9, P_conf=10)
        assert sample_failures(C, 2000, seed=1) == 0

    def test_query_cardinality(self):
        C = build(8, 2, 2, seed=0)
        with pytest.raises(CollectionError):
            C.query([1])

    def test_query_is_superset_scan(self):
        C = build_base(8, 2, 2, seed=7, P_conf=0)
        for A in combinations(range(8), 2):
            scan = [frozenset(i for i in range(8) if m >> i & 1) for m in C.masks() if all(m >> a & 1 for a in A)]
            assert C.query(A) == scan

    def test_deterministic_bytes(self):
        a = build(10, 2, 2, seed=77).to_bytes()
        b = build(10, 2, 2, seed=77).to_bytes()
        assert a == b


class TestRepUniform:
    def test_q_zero(self):
        S = WeightedSetFamily(5, [(0, 1), (2, 3)], [3, 1])
        assert rep_uniform(S, 0).sets == [frozenset({2, 3})]
        assert rep_uniform(S, 0, "max").sets == [frozenset({0, 1})]

    def test_all_pairs(self):
        S = WeightedSetFamily(5, list(combinations(range(5), 2)), set_size=2)
        R = rep_uniform(S, 1, seed=3, P_conf=0, verify=True)
        assert brute_rep_check(("uniform", 5, 3), S, 1, R)

    def test_lighter_survives(self):
        # {0,1} and {0,2} with q=1 over 3 elements compete for the same witnesses
        S = WeightedSetFamily(3, [(0, 1), (0, 2), (1, 2)], [5, 1, 9], set_size=2)
        R = rep_uniform(S, 1, "min", seed=0, P_conf=0, verify=True)
        assert brute_rep_check(("uniform", 3, 3), S, 1, R, "min")
        assert frozenset({0, 2}) in R

    def test_empty(self):
        S = WeightedSetFamily(4, set_size=2)
        assert len(rep_uniform(S, 2)) == 0
        assert len(rep_uniform_naive(S, 2)) == 0

    @given(st.randoms(use_true_random=False), st.sampled_from(["min", "max"]))
    @settings(max_examples=30)
    def test_oracle(self, rnd, sense):
        n = rnd.randint(4, 10)
        p = rnd.randint(1, 3)
        q = rnd.randint(0, min(3, n - p))
        S = random_family(rnd, n, p, rnd.randint(1, 30))
        S.sense = sense
        C = build(n, p, q, seed=rnd.randint(0, 99), P_conf=0, verify=True)
        R = rep_uniform(S, q, sense, collection=C)
        assert len(R) <= len(C)
        assert brute_rep_check(("uniform", n, p + q), S, q, R, sense)
        N = rep_uniform_naive(S, q, collection=C)
        assert len(N) <= len(C)
        assert brute_rep_check(("uniform", n, p + q), S, q, N)

    def test_reducer_cache_and_provenance(self):
        red = UniformReducer(seed=1)
        S = random_family(random.Random(2), 9, 2, 20)
        R1 = red.reduce(S, 2, "min")
        R2 = red.reduce(S, 2, "min")
        assert R1.masks == R2.masks
        assert len(red._cache) == 1
        assert red.provenance()["monte_carlo"] is False
        assert brute_rep_check(("uniform", 9, 4), S, 2, R1, "min")
