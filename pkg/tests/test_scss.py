from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_digraph, random_strong_digraph
from repfam.graphs import Digraph
from repfam.oracle import brute_meg, brute_scss
from repfam.solvers import (
    InputError,
    WitnessError,
    meg,
    min_scss,
    validate_equivalent,
    validate_strong,
)
from repfam.solvers.scss import four_matroids


def cycle(n):
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


class TestScss:
    @pytest.mark.parametrize("n", [2, 3, 5, 6])
    def test_cycle(self, n):
        r = min_scss(cycle(n))
        assert r.weight == n and sorted(r.witness) == sorted(cycle(n).arcs())

    def test_complete_3(self):
        D = Digraph(3, list(permutations(range(3), 2)))
        assert min_scss(D).weight == len(brute_scss(D)) == 3

    def test_bidirected_p3(self):
        D = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
        assert min_scss(D).weight == len(brute_scss(D)) == 4

    def test_single_vertex(self):
        assert min_scss(Digraph(1)).witness == []

    def test_not_strong(self):
        with pytest.raises(InputError):
            min_scss(Digraph(3, [(0, 1), (1, 2)]))

    def test_matroid_rank(self):
        D = Digraph(4, list(permutations(range(4), 2)))
        M = four_matroids(D, 0)
        assert M.rank == 4 * 4 - 4
        assert len(M) == 4 * D.m - 3 - 3

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=30)
    def test_against_brute(self, rnd):
        D = random_strong_digraph(rnd, rnd.randint(2, 6), rnd.uniform(0.1, 0.6))
        r = min_scss(D)
        assert r.weight == len(brute_scss(D))
        validate_strong(D, r.witness)


class TestMeg:
    def test_reduced_dag(self):
        D = Digraph(4, [(0, 1), (1, 2), (0, 3)])
        r = meg(D)
        assert sorted(r.witness) == D.arcs()

    def test_transitive_tournament(self):
        D = Digraph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        r = meg(D)
        assert r.weight == 3 and sorted(r.witness) == [(0, 1), (1, 2), (2, 3)]

    def test_two_cycle_with_tail(self):
        D = Digraph(5, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 4), (0, 2)])
        assert meg(D).weight == brute_meg(D)[0] == 5

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=30)
    def test_unweighted_brute(self, rnd):
        D = random_digraph(rnd, rnd.randint(1, 6), rnd.uniform(0.1, 0.5))
        r = meg(D)
        assert r.weight == brute_meg(D)[0]
        validate_equivalent(D, r.witness)

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=30)
    def test_weighted_brute(self, rnd):
        D = random_digraph(rnd, rnd.randint(1, 5), rnd.uniform(0.1, 0.6), range(0, 9))
        if D.m > 20:
            return
        r = meg(D, weighted=True)
        assert r.weight == brute_meg(D, weighted=True)[0]
        validate_equivalent(D, r.witness)


def test_validators():
    D = cycle(3)
    with pytest.raises(WitnessError):
        validate_strong(D, [(0, 1), (1, 2)])
    with pytest.raises(WitnessError):
        validate_equivalent(Digraph(3, [(0, 1), (1, 2)]), [(0, 1)])
