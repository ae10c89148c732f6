import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from repfam.ffmat import PrimeField, PrimeFieldMatrix, det, minor_det
from repfam.matroids import graphic_matroid, uniform_matroid
from repfam.oracle import brute_rep_check
from repfam.repfam import (
    DependentSetError,
    FamilyError,
    RankMismatchError,
    WeightedSetFamily,
    colex_rank,
    colex_subsets,
    family_product,
    family_union,
    read_family,
    rep_linear,
    rep_linear_auto,
    wedge_vector,
)

F101 = PrimeField(101)


def random_family(rng, n, p, t, wmax=9):
    pool = list(combinations(range(n), p))
    sets = rng.sample(pool, min(t, len(pool)))
    return WeightedSetFamily(n, sets, [rng.randint(0, wmax) for _ in sets], set_size=p)


@st.composite
def uniform_instances(draw, max_n=8):
    n = draw(st.integers(3, max_n))
    p = draw(st.integers(1, min(3, n - 1)))
    q = draw(st.integers(0, min(3, n - p)))
    pool = list(combinations(range(n), p))
    sets = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=25, unique=True))
    weights = draw(st.lists(st.integers(0, 20), min_size=len(sets), max_size=len(sets)))
    sense = draw(st.sampled_from(["min", "max"]))
    return n, p, q, WeightedSetFamily(n, sets, weights, set_size=p, sense=sense), sense


class TestFamily:
    def test_duplicates_keep_best(self):
        S = WeightedSetFamily(4, [(0, 1), (1, 0)], [5, 2])
        assert len(S) == 1 and S.weights == [2]
        T = WeightedSetFamily(4, [(0, 1), (1, 0)], [5, 2], sense="max")
        assert T.weights == [5]

    def test_mixed_sizes(self):
        with pytest.raises(FamilyError):
            WeightedSetFamily(4, [(0,), (1, 2)])

    def test_negative_weight(self):
        with pytest.raises(FamilyError):
            WeightedSetFamily(4, [(0,)], [-1])

    def test_roundtrip_text(self):
        S = random_family(random.Random(1), 7, 3, 10)
        from repfam.repfam import write_family
        T, q = read_family(write_family(S, 2))
        assert q == 2
        assert sorted(zip(T.masks, T.weights)) == sorted(zip(S.masks, S.weights))

    def test_bad_header(self):
        with pytest.raises(FamilyError, match="line 1"):
            read_family("2 1 4\n0 0 1\n")
        with pytest.raises(FamilyError):
            read_family("2 1 4 2\n0 0 1\n")


class TestProduct:
    def test_disjoint(self):
        A = WeightedSetFamily(3, [(1,)], [1])
        B = WeightedSetFamily(3, [(2,)], [2])
        P = family_product(A, B)
        assert P.sets == [frozenset({1, 2})] and P.weights == [3]

    def test_overlap_empty(self):
        A = WeightedSetFamily(3, [(1,)])
        assert len(family_product(A, A)) == 0

    def test_universe_mismatch(self):
        with pytest.raises(FamilyError):
            family_product(WeightedSetFamily(3, [(1,)]), WeightedSetFamily(4, [(1,)]))

    @given(st.randoms(use_true_random=False))
    def test_matches_double_loop(self, rnd):
        A = random_family(rnd, 6, 2, 8)
        B = random_family(rnd, 6, 1, 4)
        expect = {}
        for a, wa in zip(A.sets, A.weights):
            for b, wb in zip(B.sets, B.weights):
                if not a & b:
                    u = a | b
                    expect[u] = min(expect.get(u, wa + wb), wa + wb)
        P = family_product(A, B)
        assert dict(zip(P.sets, P.weights)) == expect


class TestWedge:
    def test_colex_order(self):
        assert colex_subsets(4, 2) == ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))
        for r, I in enumerate(colex_subsets(6, 3)):
            assert colex_rank(I) == r

    def test_against_minor_det(self):
        rng = random.Random(4)
        a = [[rng.randrange(101) for _ in range(7)] for _ in range(5)]
        from repfam.matroids import from_matrix
        M = from_matrix(a, field=F101)
        assert M.rank == 5
        for cols in [(0, 2, 5), (1, 3), (6,), (0, 1, 2, 3)]:
            v = wedge_vector(M, cols)
            want = [minor_det(M.matrix, I, cols) for I in colex_subsets(5, len(cols))]
            assert v == want

    @given(st.randoms(use_true_random=False))
    def test_gamma_identity(self, rnd):
        # Laplace expansion of det[S | Y] along the S columns
        k = rnd.randint(2, 5)
        p = rnd.randint(1, k - 1)
        M = uniform_matroid(9, k, F101)
        cols = rnd.sample(range(9), k)
        S, Y = sorted(cols[:p]), sorted(cols[p:])
        s, y = wedge_vector(M, S), wedge_vector(M, Y)
        total = 0
        for I in colex_subsets(k, p):
            Ic = tuple(i for i in range(k) if i not in I)
            sign = -1 if (sum(I) + sum(range(p))) % 2 else 1
            total += sign * s[colex_rank(I)] * y[colex_rank(Ic)]
        A = PrimeFieldMatrix(M.matrix.array[:, S + Y].tolist(), F101)
        assert total % 101 == det(A)


class TestRepLinear:
    def test_q_zero(self):
        M = uniform_matroid(5, 2, F101)
        S = WeightedSetFamily(5, [(0, 1), (2, 3), (1, 4)], [4, 1, 3])
        R = rep_linear(M, S, 0, "min")
        assert R.sets == [frozenset({2, 3})]
        assert rep_linear(M, S, 0, "max").sets == [frozenset({0, 1})]

    def test_all_pairs_u43(self):
        M = uniform_matroid(4, 3, F101)
        S = WeightedSetFamily(4, list(combinations(range(4), 2)), set_size=2)
        R = rep_linear(M, S, 1)
        assert len(R) <= 3
        assert brute_rep_check(M, S, 1, R)

    def test_random_u84(self):
        rng = random.Random(20)
        M = uniform_matroid(8, 4)
        S = random_family(rng, 8, 2, 20, 50)
        R = rep_linear(M, S, 2, "min")
        assert len(R) <= 6
        assert brute_rep_check(M, S, 2, R, "min")

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatchError):
            rep_linear(uniform_matroid(5, 4), WeightedSetFamily(5, [(0, 1)]), 1)

    def test_dependent_input(self):
        M = graphic_matroid((3, [(0, 1), (0, 1), (1, 2)]))
        with pytest.raises(DependentSetError):
            rep_linear(M, WeightedSetFamily(3, [(0, 1)]), 0)

    @given(uniform_instances())
    def test_covering_and_size(self, inst):
        n, p, q, S, sense = inst
        M = uniform_matroid(n, p + q)
        R = rep_linear(M, S, q, sense)
        from math import comb
        assert len(R) <= comb(p + q, p)
        assert set(R.masks) <= set(S.masks)
        assert brute_rep_check(M, S, q, R, sense)

    @given(uniform_instances())
    def test_transitive(self, inst):
        n, p, q, S, sense = inst
        M = uniform_matroid(n, p + q)
        R = rep_linear(M, rep_linear(M, S, q, sense), q, sense)
        assert brute_rep_check(M, S, q, R, sense)

    @given(uniform_instances(), st.randoms(use_true_random=False))
    def test_union(self, inst, rnd):
        n, p, q, S, sense = inst
        M = uniform_matroid(n, p + q)
        idx = list(range(len(S)))
        rnd.shuffle(idx)
        cut = len(idx) // 2
        parts = [S.subfamily(sorted(idx[:cut])), S.subfamily(sorted(idx[cut:]))]
        reps = [rep_linear(M, P, q, sense) for P in parts if len(P)]
        U = family_union(reps, sense)
        assert brute_rep_check(M, S, q, U, sense)

    @given(st.randoms(use_true_random=False))
    def test_convolution(self, rnd):
        k, n = 5, 8
        p1, p2 = rnd.randint(1, 2), rnd.randint(1, 2)
        M = uniform_matroid(n, k)
        S1 = random_family(rnd, n, p1, 10)
        S2 = random_family(rnd, n, p2, 10)
        R1 = rep_linear(uniform_matroid(n, k), S1, k - p1)
        R2 = rep_linear(uniform_matroid(n, k), S2, k - p2)
        big = family_product(S1, S2)
        small = family_product(R1, R2)
        if len(big):
            assert brute_rep_check(M, big, k - p1 - p2, small, "min")

    def test_graphic_min(self):
        # K_4 edges, p=1, q=2: the cheapest edge of each useful class stays
        edges = list(combinations(range(4), 2))
        M = graphic_matroid((4, edges))
        rng = random.Random(2)
        for _ in range(20):
            S = random_family(rng, 6, 2, 8, 30)
            S = WeightedSetFamily(6, [s for s in S.sets if M.is_independent(s)],
                                  [w for s, w in zip(S.sets, S.weights) if M.is_independent(s)], set_size=2)
            if not len(S):
                continue
            R = rep_linear(M, S, 1, "min")
            assert brute_rep_check(M, S, 1, R, "min")


class TestRepLinearAuto:
    def test_exact_rank_same(self):
        M = uniform_matroid(7, 4)
        S = random_family(random.Random(6), 7, 2, 12)
        a = rep_linear(M, S, 2)
        b = rep_linear_auto(M, S, 2, seed=3)
        assert a.masks == b.masks

    def test_graphic_k5(self):
        edges = list(combinations(range(5), 2))
        M = graphic_matroid((5, edges))
        S = WeightedSetFamily(10, [(i,) for i in range(10)], list(range(10)), set_size=1)
        R = rep_linear_auto(M, S, 2, seed=1)
        assert len(R) <= 3
        assert brute_rep_check(M, S, 2, R, "min")

    def test_size_bound_u10_9(self):
        S = random_family(random.Random(8), 10, 2, 30)
        R = rep_linear_auto(uniform_matroid(10, 9), S, 2, seed=5)
        assert len(R) <= 6
        assert brute_rep_check(("uniform", 10, 4), S, 2, R, "min")
