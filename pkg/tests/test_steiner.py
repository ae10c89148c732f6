import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_partial_ktree
from repfam.graphs import Graph, TreeDecomposition
from repfam.oracle import brute_steiner, exact_tree_decomposition
from repfam.solvers import InputError, WitnessError, steiner_tree, validate_steiner


def solve(G, T):
    return steiner_tree(G, T, exact_tree_decomposition(G))


def test_star_leaves():
    G = Graph(4, [(0, 1), (0, 2), (0, 3)])
    r = solve(G, [1, 2, 3])
    assert r.weight == 3 and r.witness == [(0, 1), (0, 2), (0, 3)]


def test_single_terminal():
    r = solve(Graph(3, [(0, 1), (1, 2)]), [2])
    assert r.weight == 0 and r.witness == []


def test_disconnected_terminals():
    r = solve(Graph(4, [(0, 1), (2, 3)]), [0, 3])
    assert not r.found


def test_detour_cheaper():
    # direct edge costs 10, the two-hop route costs 2
    G = Graph(3, [(0, 2), (0, 1), (1, 2)], [10, 1, 1])
    r = solve(G, [0, 2])
    assert r.weight == 2 and r.witness == [(0, 1), (1, 2)]


def test_invalid_td():
    G = Graph(3, [(0, 1), (1, 2)])
    bad = TreeDecomposition([frozenset({0, 1}), frozenset({2})], [(0, 1)])
    with pytest.raises(InputError):
        steiner_tree(G, [0, 2], bad)


def test_empty_terminals():
    with pytest.raises(InputError):
        solve(Graph(2, [(0, 1)]), [])


def test_size_invariant_reported():
    rng = random.Random(1)
    G = random_partial_ktree(rng, 10, 3, 0.9, range(1, 5))
    r = solve(G, [0, 4, 7, 9])
    width = r.stats["width"]
    assert r.stats["max_family"] <= 2 ** (width + 1)


@given(st.randoms(use_true_random=False), st.integers(1, 3))
@settings(max_examples=40)
def test_against_brute(rnd, width):
    n = rnd.randint(2, 10)
    G = random_partial_ktree(rnd, n, width, rnd.uniform(0.5, 1.0), range(0, 8))
    T = rnd.sample(range(n), rnd.randint(1, min(n, 5)))
    r = solve(G, T)
    want = brute_steiner(G, T)
    assert (r.weight if r.found else None) == want
    if r.found:
        assert validate_steiner(G, T, r.witness, r.weight) == want


def test_validator_rejects():
    G = Graph(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(WitnessError):
        validate_steiner(G, [0, 3], [(0, 1), (2, 3)])
    with pytest.raises(WitnessError):
        validate_steiner(G, [0, 2], [(0, 2)])
    with pytest.raises(WitnessError):
        validate_steiner(G, [0, 2], [(0, 1), (1, 2)], weight=5)
