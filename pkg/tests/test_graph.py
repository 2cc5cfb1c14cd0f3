import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from psne.generators import generate_ba, generate_er
from psne.graph import (GraphFormatError, from_edges, load_edge_list, random_step,
                        random_steps, read_labels, serialize)

from conftest import random_connected_graph


class TestLoadEdgeList:
    def test_path_graph(self, p3):
        assert (p3.n, p3.m) == (3, 2)
        np.testing.assert_array_equal(p3.degrees, [1, 2, 1])

    def test_duplicates_merge_by_sum(self):
        g = load_edge_list("0 1\n0 1")
        assert (g.n, g.m) == (2, 1)
        assert g.weight(0, 1) == g.weight(1, 0) == 2.0

    def test_self_loop_rejected(self):
        with pytest.raises(GraphFormatError, match="self-loop"):
            load_edge_list("0 0")

    @pytest.mark.parametrize("text, lineno", [("0 1\n1 x", 2), ("0 1\n\n1 2 3 4", 3), ("# c\n0", 2)])
    def test_malformed_line_reports_number(self, text, lineno):
        with pytest.raises(GraphFormatError, match=f"line {lineno}"):
            load_edge_list(text)

    @pytest.mark.parametrize("w", ["0", "-1.5"])
    def test_nonpositive_weight(self, w):
        with pytest.raises(GraphFormatError, match="nonpositive"):
            load_edge_list(f"0 1 {w}")

    def test_isolated_node_rejected(self):
        with pytest.raises(GraphFormatError, match="isolated"):
            from_edges([0], [1], node_ids=np.array([5, 6, 7]))

    def test_ids_compacted_in_first_appearance_order(self):
        g = load_edge_list("# header\n100 7\n7 42 2.5\n")
        np.testing.assert_array_equal(g.node_ids, [100, 7, 42])
        assert g.weight(1, 2) == 2.5
        assert g.edge_id(2, 1) == g.edge_id(1, 2)

    def test_unknown_edge(self, p3):
        assert p3.weight(0, 2) == 0.0
        with pytest.raises(KeyError):
            p3.edge_id(0, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.floats(0.05, 0.9), st.booleans(), st.integers(0, 2**32 - 1))
def test_serialize_roundtrip_and_degree_sum(n, p, weighted, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, p, rng, weighted)
    assert load_edge_list(serialize(g)) == g
    assert np.isclose(g.degrees.sum(), 2 * g.edge_w.sum())
    adj = g.adjacency().toarray()
    np.testing.assert_array_equal(adj, adj.T)


def test_roundtrip_keeps_original_ids():
    g = load_edge_list("9 3\n3 5 0.25\n5 9\n12 5\n")
    h = load_edge_list(serialize(g))
    assert h == g
    np.testing.assert_array_equal(h.node_ids, [9, 3, 5, 12])


class TestRandomStep:
    def test_p3_middle_is_fair(self, p3):
        rng = np.random.default_rng(1)
        draws = np.array([random_step(p3, 1, rng) for _ in range(100_000)])
        assert set(np.unique(draws)) == {0, 2}
        count = (draws == 0).sum()
        sigma = np.sqrt(100_000 * 0.25)
        assert abs(count - 50_000) < 3 * sigma

    def test_star_weights(self):
        g = load_edge_list("0 1 1\n0 2 3\n")
        rng = np.random.default_rng(2)
        nxt, _ = random_steps(g, np.zeros(100_000, dtype=np.int64), rng)
        freq = (nxt == 1).mean()
        sigma = np.sqrt(0.25 * 0.75 / 100_000)
        assert abs(freq - 0.25) < 3 * sigma

    def test_degree_one_node(self, p3):
        rng = np.random.default_rng(3)
        assert all(random_step(p3, 0, rng) == 1 for _ in range(100))
        nxt, w = random_steps(p3, np.full(1000, 2), rng)
        assert np.all(nxt == 1) and np.all(w == 1.0)

    @pytest.mark.parametrize("vectorised", [False, True])
    def test_chi_square(self, vectorised):
        g = load_edge_list("0 1 1\n0 2 2\n0 3 0.5\n0 4 4\n1 2\n")
        rng = np.random.default_rng(4)
        n = 100_000
        if vectorised:
            nxt, _ = random_steps(g, np.zeros(n, dtype=np.int64), rng)
        else:
            nxt = np.array([random_step(g, 0, rng) for _ in range(n)])
        nb = g.neighbors(0)
        observed = np.array([(nxt == v).sum() for v in nb])
        expected = n * np.array([g.weight(0, v) for v in nb]) / g.degrees[0]
        assert stats.chisquare(observed, expected).pvalue > 0.001


class TestGenerators:
    def test_er_complete(self):
        g = generate_er(100, 1.0, 5)
        assert g.m == 4950 and g.n == 100

    def test_ba_deterministic(self):
        a, b = generate_ba(50, 2, 11), generate_ba(50, 2, 11)
        assert a == b
        assert a != generate_ba(50, 2, 12)

    def test_er_mean_degree(self):
        n = 10_000
        g = generate_er(n, 10 / n, 3)
        assert g.n == n
        assert abs(g.degrees.mean() - 10) < 1.0

    def test_er_no_isolated_nodes_even_when_sparse(self):
        g = generate_er(300, 0.002, 0)
        assert g.n == 300 and np.all(g.degrees > 0)

    @pytest.mark.parametrize("call", [lambda: generate_er(10, 0.0, 0), lambda: generate_er(1, 0.5, 0),
                                      lambda: generate_ba(5, 5, 0), lambda: generate_ba(5, 0, 0)])
    def test_bad_parameters(self, call):
        with pytest.raises(ValueError):
            call()


def test_read_labels(p3):
    labels = read_labels("0 1 2\n2 5\n0 3\n", p3)
    assert labels == [{1, 2, 3}, set(), {5}]
    with pytest.raises(GraphFormatError):
        read_labels("9 1\n", p3)
