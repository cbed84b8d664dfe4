"""Graph core: powers, blow-ups, girth, densities, witnesses, edge-list IO."""

from __future__ import annotations

import io
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pathramsey import (
    Graph,
    GraphFormatError,
    ParameterError,
    PathWitness,
    complete_blowup,
    complete_graph,
    cycle_graph,
    density_pair,
    density_set,
    distances,
    empty_graph,
    girth_violation,
    graph_from_text,
    graph_to_text,
    max_degree,
    path_graph,
    path_power,
    power,
    random_graph,
    read_edge_list,
    sheared_blowup,
    write_edge_list,
)

from conftest import floyd_warshall, oracle_girth, oracle_cross_edges, oracle_induced_edges


def power_oracle(g: Graph, k: int) -> set[tuple[int, int]]:
    d = floyd_warshall(g)
    return {
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if 1 <= d[u][v] <= k
    }


class TestGraphBasics:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphFormatError):
            Graph(3, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphFormatError):
            Graph(3, [(0, 3)])

    def test_duplicate_edges_collapse(self):
        g = Graph(3, [(0, 1), (1, 0)])
        assert g.m == 1

    def test_adjacency_symmetric_and_degree_sum(self):
        g = random_graph(12, 0.4, seed=3)
        for v in range(g.n):
            for w in g.neighbours(v):
                assert v in g.neighbours(w)
        assert sum(g.degree(v) for v in range(g.n)) == 2 * g.m

    def test_immutable_value_semantics(self):
        g = path_graph(4)
        h = Graph(4, [(0, 1), (1, 2), (2, 3)])
        assert g == h and hash(g) == hash(h)


class TestPower:
    def test_power_identity_at_k1(self):
        g = path_graph(4)
        assert power(g, 1) == g

    def test_power_beyond_diameter_is_clique(self):
        assert power(path_graph(4), 3) == complete_graph(4)

    def test_p5_squared(self):
        got = power(path_graph(5), 2)
        assert got.edges == frozenset(power_oracle(path_graph(5), 2))
        assert got.m == 7

    def test_components_never_joined(self):
        g = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        p = power(g, 5)
        assert not p.has_edge(2, 3)
        assert p.has_edge(0, 2) and p.has_edge(3, 5)

    @given(st.integers(0, 2 ** 20), st.integers(2, 14), st.integers(1, 5))
    @settings(max_examples=60, deadline=None)
    def test_power_matches_distance_oracle(self, seed, n, k):
        g = random_graph(n, 0.3, seed)
        assert power(g, k).edges == frozenset(power_oracle(g, k))

    def test_power_oracle_at_fifty_vertices(self):
        g = random_graph(50, 0.08, seed=123)
        for k in (1, 2, 3, 7):
            assert power(g, k).edges == frozenset(power_oracle(g, k))

    @given(st.integers(0, 2 ** 20), st.integers(2, 10), st.integers(1, 3), st.integers(1, 3))
    @settings(max_examples=40, deadline=None)
    def test_iterated_power_contained_in_product_power(self, seed, n, j, k):
        g = random_graph(n, 0.3, seed)
        iterated = power(power(g, j), k)
        product = power(g, j * k)
        assert iterated.edges <= product.edges


class TestPathPower:
    def test_p3_line(self):
        assert path_power(3, 1) == path_graph(3)

    def test_k_at_least_n_gives_clique(self):
        assert path_power(4, 5) == complete_graph(4)
        assert path_power(4, 5).m == 6

    def test_edge_count_formula(self):
        for n in range(2, 20):
            for k in range(1, n):
                assert path_power(n, k).m == n * k - k * (k + 1) // 2
        assert path_power(5, 2).m == 7

    def test_matches_power_of_path(self):
        for n in range(1, 12):
            for k in range(1, n + 2):
                assert path_power(n, k) == power(path_graph(n), k) if n > 1 else True


class TestBlowups:
    def test_complete_blowup_of_edge(self):
        host, _ = complete_blowup(complete_graph(2), 2)
        assert host == complete_graph(4)
        assert host.m == 6

    def test_complete_blowup_p3_t3(self):
        host, bmap = complete_blowup(path_graph(3), 3)
        assert host.m == 2 * 9 + 3 * 3 == 27
        bmap.validate()

    def test_complete_blowup_t1_identity(self):
        g = random_graph(8, 0.4, seed=1)
        host, _ = complete_blowup(g, 1)
        assert host == g

    def test_sheared_blowup_edge_counts_both_rules(self):
        for seed in (None, 9):
            host, bmap = sheared_blowup(complete_graph(2), 2, seed=seed)
            assert host.m == 4
            bmap.validate()

    def test_sheared_blowup_t1_edgeless(self):
        g = path_graph(5)
        host, _ = sheared_blowup(g, 1)
        assert host.n == 5 and host.m == 0

    def test_sheared_blowup_p3_t3(self):
        host, _ = sheared_blowup(path_graph(3), 3)
        assert host.m == 2 * 6 + 3 * 3 == 21

    def test_formulas_random_sweep(self):
        rng = random.Random(2024)
        for _ in range(60):
            n = rng.randint(1, 12)
            t = rng.randint(1, 4)
            h = random_graph(n, rng.random(), rng.randrange(2 ** 30))
            full, m1 = complete_blowup(h, t)
            shear, m2 = sheared_blowup(h, t, seed=rng.randrange(2 ** 30))
            assert full.m == h.m * t * t + n * t * (t - 1) // 2
            assert shear.m == h.m * (t * t - t) + n * t * (t - 1) // 2
            m1.validate()
            m2.validate()

    def test_sheared_is_subgraph_missing_exactly_matchings(self):
        rng = random.Random(7)
        for _ in range(20):
            h = random_graph(rng.randint(2, 8), 0.5, rng.randrange(2 ** 30))
            t = rng.randint(1, 4)
            full, _ = complete_blowup(h, t)
            shear, _ = sheared_blowup(h, t, seed=rng.randrange(2 ** 30))
            assert shear.edges <= full.edges
            assert len(full.edges - shear.edges) == h.m * t

    def test_clique_map_linearisation(self):
        _, bmap = complete_blowup(path_graph(3), 4)
        assert bmap.host_vertex(2, 3) == 11
        assert bmap.base_of(11) == 2
        assert bmap.clique_of[1] == (4, 5, 6, 7)

    def test_subclique_must_stay_inside(self):
        _, bmap = complete_blowup(path_graph(2), 2)
        with pytest.raises(ParameterError):
            bmap.with_subcliques({0: (0, 3)})


class TestGirth:
    def test_c5_above_limit(self):
        assert girth_violation(cycle_graph(5), 4) is None

    def test_c5_at_limit_returns_cycle(self):
        cyc = girth_violation(cycle_graph(5), 5)
        assert cyc is not None and len(cyc) == 5
        assert sorted(cyc) == [0, 1, 2, 3, 4]

    def test_k4_triangle(self):
        cyc = girth_violation(complete_graph(4), 3)
        assert cyc is not None and len(cyc) == 3
        g = complete_graph(4)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            assert g.has_edge(a, b)

    def test_acyclic_graph(self):
        assert girth_violation(path_graph(6), 6) is None

    def test_limit_below_three_rejected(self):
        with pytest.raises(ParameterError):
            girth_violation(complete_graph(3), 2)

    @given(st.integers(0, 2 ** 20), st.integers(3, 10))
    @settings(max_examples=60, deadline=None)
    def test_matches_girth_oracle(self, seed, n):
        g = random_graph(n, 0.4, seed)
        truth = oracle_girth(g)
        found = girth_violation(g, n)
        if truth == math.inf:
            assert found is None
        else:
            assert found is not None and len(found) == truth
            for a, b in zip(found, found[1:] + found[:1]):
                assert g.has_edge(a, b)
            assert len(set(found)) == len(found)


class TestDensities:
    def test_complete_graph_density_one(self):
        assert density_set(complete_graph(4), range(4)) == 1

    def test_edgeless_density_zero(self):
        assert density_set(empty_graph(5), [0, 2, 4]) == 0

    def test_p5_triple(self):
        assert density_set(path_graph(5), [1, 2, 3]) == Fraction(2, 3)
        assert density_set(path_graph(5), [1, 2, 3]) == Fraction(
            oracle_induced_edges(path_graph(5), [1, 2, 3]), 3
        )

    def test_density_set_needs_two(self):
        with pytest.raises(ParameterError):
            density_set(path_graph(3), [1])

    def test_pair_complete_bipartite(self):
        from pathramsey import complete_bipartite

        g = complete_bipartite(3, 2)
        assert density_pair(g, [0, 1, 2], [3, 4]) == 1

    def test_pair_no_cross(self):
        g = Graph(4, [(0, 1), (2, 3)])
        assert density_pair(g, [0, 1], [2, 3]) == 0

    def test_pair_p4(self):
        g = path_graph(4)
        expected = Fraction(oracle_cross_edges(g, [0, 2], [1, 3]), 4)
        assert density_pair(g, [0, 2], [1, 3]) == expected == Fraction(3, 4)

    def test_pair_rejects_overlap_and_empty(self):
        g = path_graph(4)
        with pytest.raises(ParameterError):
            density_pair(g, [0, 1], [1, 2])
        with pytest.raises(ParameterError):
            density_pair(g, [], [1, 2])

    def test_exact_rational_type(self):
        g = random_graph(9, 0.5, seed=5)
        d = density_set(g, range(9))
        assert isinstance(d, Fraction)


class TestMeasurements:
    def test_max_degree(self):
        assert max_degree(cycle_graph(5)) == 2
        assert max_degree(complete_graph(5)) == 4
        assert max_degree(empty_graph(3)) == 0

    def test_distances_path(self):
        assert distances(path_graph(4), 0) == [0, 1, 2, 3]

    def test_distances_unreachable_infinite(self):
        g = Graph(4, [(0, 1)])
        d = distances(g, 0)
        assert d[2] == math.inf and d[3] == math.inf

    @given(st.integers(0, 2 ** 20), st.integers(2, 12))
    @settings(max_examples=40, deadline=None)
    def test_distances_match_floyd_warshall(self, seed, n):
        g = random_graph(n, 0.3, seed)
        fw = floyd_warshall(g)
        for s in range(g.n):
            assert distances(g, s) == fw[s]


class TestPathWitness:
    def test_valid_path(self):
        PathWitness((0, 1, 2)).validate(path_graph(3))

    def test_rejects_non_edge_step(self):
        with pytest.raises(GraphFormatError):
            PathWitness((0, 2)).validate(path_graph(3))

    def test_rejects_repeat(self):
        with pytest.raises(GraphFormatError):
            PathWitness((0, 1, 0)).validate(path_graph(3))

    def test_class_trace_checked(self):
        g = cycle_graph(6)
        parts = [[0, 2, 4], [1, 3, 5]]
        PathWitness((0, 1, 2, 3), (0, 1, 0, 1)).validate(g, parts)
        with pytest.raises(GraphFormatError):
            PathWitness((0, 1, 2, 3), (0, 1, 1, 0)).validate(g, parts)


class TestEdgeListFormat:
    def test_round_trip_byte_stable(self):
        g = random_graph(10, 0.5, seed=11)
        text = graph_to_text(g)
        again = graph_to_text(graph_from_text(text))
        assert text == again
        assert text.endswith("\n")
        header = text.splitlines()[0]
        assert header == f"{g.n} {g.m}"

    def test_write_read_stream(self):
        g = path_graph(5)
        buf = io.StringIO()
        write_edge_list(g, buf)
        buf.seek(0)
        assert read_edge_list(buf) == g

    def test_rejects_bad_header(self):
        with pytest.raises(GraphFormatError):
            graph_from_text("nonsense\n")

    def test_rejects_unsorted_pair(self):
        with pytest.raises(GraphFormatError):
            graph_from_text("3 1\n2 1\n")

    def test_rejects_wrong_count(self):
        with pytest.raises(GraphFormatError):
            graph_from_text("3 2\n0 1\n")
