import io

import pytest
from hypothesis import given, settings, strategies as st

import networkx as nx

from detcode import (
    CUBIC_MAX_N,
    GraphError,
    build_graph,
    complete_graph,
    cycle_graph,
    enumerate_cubic,
    find_twins,
    g77,
    generate,
    hypercube,
    ladder,
    parse_family,
    path_graph,
    prism,
    random_gnp,
    random_tree,
    read_detectors,
    read_graph,
    to_dot,
    torus,
    triangle_count_edge,
    write_detectors,
    write_graph,
)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


class TestBuild:
    def test_dedup_and_orientation(self):
        g = build_graph(3, [(0, 1), (1, 0), (2, 1)])
        assert g.m == 2 and g.edges == ((0, 1), (1, 2))

    def test_rejects_loop(self):
        with pytest.raises(GraphError, match=r"\(1,1\)"):
            build_graph(2, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphError, match=r"\(0,5\)"):
            build_graph(3, [(0, 5)])

    def test_degree_and_neighbors(self):
        g = path_graph(4)
        assert [g.degree(v) for v in range(4)] == [1, 2, 2, 1]
        assert g.neighbors(1) == (0, 2)

    @given(st.integers(2, 9), st.integers(0, 10 ** 9))
    @settings(max_examples=60, deadline=None)
    def test_degree_sum_is_twice_edges(self, n, seed):
        import random
        g = random_gnp(n, 0.5, random.Random(seed))
        assert sum(g.degree(v) for v in range(g.n)) == 2 * g.m


class TestFamilies:
    def test_path_cycle_complete(self):
        assert path_graph(1).m == 0
        assert cycle_graph(5).m == 5
        assert complete_graph(5).m == 10
        with pytest.raises(GraphError):
            cycle_graph(2)

    def test_hypercube(self):
        q3 = hypercube(3)
        assert (q3.n, q3.m) == (8, 12)
        assert all(q3.degree(v) == 3 for v in range(8))
        q4 = hypercube(4)
        assert (q4.n, q4.m) == (16, 32)

    def test_ladder_and_prism(self):
        l4 = ladder(4)
        assert (l4.n, l4.m) == (8, 10)
        p5 = prism(5)
        assert (p5.n, p5.m) == (10, 15)
        assert all(p5.degree(v) == 3 for v in range(10))

    def test_g77_shape(self):
        g = g77()
        assert (g.n, g.m) == (7, 7)
        assert sorted(g.degree(v) for v in range(7)) == [1, 1, 1, 2, 3, 3, 3]

    def test_torus_regularity(self):
        for lattice, deg in [("SQR", 4), ("TRI", 6), ("KNG", 8), ("HEX", 3)]:
            w, h = (6, 4) if lattice == "HEX" else (5, 4)
            g = torus(lattice, w, h)
            assert g.n == w * h
            assert all(g.degree(v) == deg for v in range(g.n)), lattice

    def test_torus_hex_needs_even(self):
        with pytest.raises(GraphError):
            torus("HEX", 5, 4)

    def test_generate_matches_direct(self):
        assert generate(parse_family("prism:6")).edges == prism(6).edges
        assert generate(parse_family("torus:SQR:4:3")).edges == torus("SQR", 4, 3).edges
        with pytest.raises(GraphError):
            generate(parse_family("nosuch:3"))

    def test_random_tree_is_tree(self):
        import random
        rng = random.Random(5)
        for _ in range(20):
            n = rng.randint(1, 30)
            t = random_tree(n, rng)
            assert t.m == n - 1
            assert nx.is_connected(to_nx(t)) or n == 1


class TestTwinsAndTriangles:
    def test_closed_twins(self):
        g = complete_graph(3)
        assert ("closed" in {k for _, _, k in find_twins(g)})

    def test_open_twins(self):
        # two pendants on the same support
        g = build_graph(3, [(0, 2), (1, 2)])
        assert (0, 1, "open") in find_twins(g)

    def test_triangle_count(self):
        g = complete_graph(4)
        assert triangle_count_edge(g, 0, 1) == 2
        with pytest.raises(GraphError):
            triangle_count_edge(path_graph(3), 0, 2)

    def test_twins_match_naive(self):
        from conftest import adjacency, random_graphs
        for g in random_graphs(11, 40, 9):
            adj = adjacency(g)
            naive = set()
            for u in range(g.n):
                for v in range(u + 1, g.n):
                    if adj[u] | {u} == adj[v] | {v}:
                        naive.add((u, v, "closed"))
                    elif adj[u] == adj[v]:
                        naive.add((u, v, "open"))
            assert set(find_twins(g)) == naive


class TestCubicEnumeration:
    def test_iso_class_counts(self):
        assert [len(list(enumerate_cubic(n))) for n in (4, 6, 8, 10)] == [1, 2, 5, 19]

    def test_all_cubic_connected(self):
        for n in (4, 6, 8):
            for g in enumerate_cubic(n, dedup=False):
                assert all(g.degree(v) == 3 for v in range(g.n))
                assert nx.is_connected(to_nx(g))

    def test_dedup_covers_raw(self):
        reps = list(enumerate_cubic(8))
        raw = list(enumerate_cubic(8, dedup=False))
        rep_nx = [to_nx(g) for g in reps]
        for g in raw:
            assert any(nx.is_isomorphic(to_nx(g), r) for r in rep_nx)
        # and representatives are pairwise non-isomorphic
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                assert not nx.is_isomorphic(rep_nx[i], rep_nx[j])

    def test_bounds_enforced(self):
        with pytest.raises(ValueError):
            list(enumerate_cubic(5))
        with pytest.raises(ValueError):
            list(enumerate_cubic(CUBIC_MAX_N + 2))


class TestIO:
    def test_graph_round_trip(self):
        g = prism(6)
        buf = io.StringIO()
        write_graph(g, buf, comments=["sample"])
        back = read_graph(io.StringIO(buf.getvalue()))
        assert back.n == g.n and back.edges == g.edges

    def test_reader_validates_header(self):
        with pytest.raises(GraphError):
            read_graph(io.StringIO("p graph 3 2\ne 1 2\n"))
        with pytest.raises(GraphError):
            read_graph(io.StringIO("e 1 2\n"))

    def test_detector_round_trip(self):
        buf = io.StringIO()
        write_detectors([0, 3, 5], buf)
        assert read_detectors(io.StringIO(buf.getvalue())) == [0, 3, 5]

    def test_dot_marks_detectors(self):
        dot = to_dot(path_graph(3), detectors=[1])
        assert "filled" in dot and "--" in dot
