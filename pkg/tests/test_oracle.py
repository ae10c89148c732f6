import pytest

from repfam.graphs import Digraph, Graph
from repfam.matroids import graphic_matroid, uniform_matroid
from repfam.oracle import (
    OracleRefusal,
    brute_cheapest_path,
    brute_k_path,
    brute_long_cycle,
    brute_meg,
    brute_rep_check,
    brute_scss,
    brute_steiner,
    brute_subgraph_iso,
    exact_tree_decomposition,
)
from repfam.repfam import WeightedSetFamily


def _path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def _dcycle(n):
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


class TestRepCheck:
    def test_identity_passes(self):
        S = WeightedSetFamily(5, [{0, 1}, {1, 2}, {3, 4}], [3, 1, 2])
        assert brute_rep_check(("uniform", 5, 3), S, 1, S, "min")

    def test_empty_candidate_fails_at_empty_y(self):
        S = WeightedSetFamily(4, [{0, 1}])
        res = brute_rep_check(("uniform", 4, 2), S, 0, WeightedSetFamily(4, set_size=2))
        assert not res
        assert res.Y == frozenset()
        assert res.X == frozenset({0, 1})

    def test_weight_violation_detected(self):
        # with q = 0 any one set represents, but min sense needs the lighter one
        S = WeightedSetFamily(4, [{0, 1}, {0, 2}], [5, 1])
        heavy = S.subfamily([0])
        assert brute_rep_check(("uniform", 4, 2), S, 0, heavy, None)
        assert not brute_rep_check(("uniform", 4, 2), S, 0, heavy, "min")
        assert brute_rep_check(("uniform", 4, 2), S, 0, heavy, "max")

    def test_candidate_must_be_subfamily(self):
        S = WeightedSetFamily(4, [{0, 1}])
        other = WeightedSetFamily(4, [{2, 3}])
        assert not brute_rep_check(("uniform", 4, 2), S, 0, other)

    def test_linear_matroid_graphic(self):
        # triangle: {01, 12} is a spanning tree; adding edge 02 closes a cycle
        M = graphic_matroid((3, [(0, 1), (1, 2), (0, 2)]))
        S = WeightedSetFamily(3, [{0}, {1}, {2}])
        assert not brute_rep_check(M, S, 1, S.subfamily([0]))
        assert brute_rep_check(M, S, 1, S.subfamily([0, 1]))

    def test_agrees_with_uniform_linear_matroid(self):
        S = WeightedSetFamily(5, [{0, 1}, {2, 3}, {1, 4}])
        cand = S.subfamily([0, 1])
        a = brute_rep_check(("uniform", 5, 3), S, 1, cand)
        b = brute_rep_check(uniform_matroid(5, 3), S, 1, cand)
        assert bool(a) == bool(b)

    def test_refuses_large_universe(self):
        S = WeightedSetFamily(15, [{0}])
        with pytest.raises(OracleRefusal):
            brute_rep_check(("uniform", 15, 2), S, 1, S)


class TestPathsAndCycles:
    def test_path_found(self):
        assert brute_k_path(_path(5), 4) == [0, 1, 2, 3, 4] or brute_k_path(_path(5), 4) == [4, 3, 2, 1, 0]

    def test_path_too_long(self):
        assert brute_k_path(_path(5), 5) is None

    def test_path_refusal(self):
        with pytest.raises(OracleRefusal):
            brute_k_path(_path(13), 3)

    def test_cheapest_two_routes(self):
        D = Digraph(4, [(0, 1), (1, 3), (0, 2), (2, 3)], [2, 3, 1, 2])
        assert brute_cheapest_path(D, 2) == 3

    def test_cheapest_single_path(self):
        G = Graph(3, [(0, 1), (1, 2)], [4, 6])
        assert brute_cheapest_path(G, 2) == 10

    def test_c5_has_long_cycle(self):
        cyc = brute_long_cycle(_dcycle(5), 4)
        assert cyc is not None and len(cyc) == 5

    def test_dag_has_no_cycle(self):
        D = Digraph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        assert brute_long_cycle(D, 2) is None


class TestSteiner:
    def test_star(self):
        G = Graph(4, [(0, 1), (0, 2), (0, 3)])
        assert brute_steiner(G, [1, 2, 3]) == 3

    def test_single_terminal(self):
        assert brute_steiner(_path(4), [2]) == 0

    def test_disconnected(self):
        G = Graph(4, [(0, 1), (2, 3)])
        assert brute_steiner(G, [0, 3]) is None

    def test_detour_beats_direct_edge(self):
        G = Graph(3, [(0, 1), (0, 2), (2, 1)], [10, 3, 3])
        assert brute_steiner(G, [0, 1]) == 6


class TestStrong:
    def test_cycle(self):
        assert len(brute_scss(_dcycle(5))) == 5

    def test_complete_three(self):
        D = Digraph(3, [(a, b) for a in range(3) for b in range(3) if a != b])
        assert len(brute_scss(D)) == 3

    def test_bidirected_path(self):
        D = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
        assert len(brute_scss(D)) == 4

    def test_not_strong(self):
        with pytest.raises(ValueError):
            brute_scss(Digraph(2, [(0, 1)]))

    def test_refusal(self):
        with pytest.raises(OracleRefusal):
            brute_scss(_dcycle(7))

    def test_transitive_tournament(self):
        D = Digraph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        assert brute_meg(D)[0] == 3

    def test_reduced_dag_is_itself(self):
        D = Digraph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        count, arcs = brute_meg(D)
        assert count == 4 and sorted(arcs) == D.arcs()

    def test_weighted_prefers_cheap_route(self):
        # 0->2 directly costs 10, via 1 costs 2+2 but 0->1 and 1->2 are needed anyway
        D = Digraph(3, [(0, 1), (1, 2), (0, 2)], [2, 2, 10])
        assert brute_meg(D, weighted=True)[0] == 4


class TestIsomorphism:
    def test_p3_in_triangle(self):
        phi = brute_subgraph_iso(Graph(3, [(0, 1), (1, 2), (0, 2)]), _path(3))
        assert phi is not None and len(set(phi.values())) == 3

    def test_star_not_in_path(self):
        star = Graph(5, [(0, i) for i in range(1, 5)])
        assert brute_subgraph_iso(_path(10), star) is None


class TestTreewidth:
    @pytest.mark.parametrize("G,width", [
        (_path(6), 1),
        (Graph(5, [(i, (i + 1) % 5) for i in range(5)]), 2),
        (Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)]), 3),
        (Graph(9, [(r * 3 + c, r * 3 + c + 1) for r in range(3) for c in range(2)]
               + [(r * 3 + c, r * 3 + c + 3) for r in range(2) for c in range(3)]), 3),
        (Graph(4, []), 0),
    ])
    def test_known_widths(self, G, width):
        td = exact_tree_decomposition(G)
        td.validate(G)
        assert td.width == width

    def test_refusal(self):
        with pytest.raises(OracleRefusal):
            exact_tree_decomposition(_path(13))
