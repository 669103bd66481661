import numpy as np
import pytest

from muxepi import (
    Graph,
    InvalidArgumentError,
    betweenness,
    build_multiplex,
    clustering_coefficients,
    degree_sequence,
    generate_ba,
    generate_ws,
    read_edge_list,
    write_edge_list,
)
from oracles import brute_force_betweenness, random_graph


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


class TestGraph:
    def test_rejects_self_loops(self):
        with pytest.raises(InvalidArgumentError):
            Graph(3, [(0, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            Graph(3, [(0, 3)])

    def test_undirected_adjacency(self):
        g = Graph(3, [(0, 1)])
        assert g.has_edge(0, 1) and g.has_edge(1, 0)
        assert list(g.neighbors(1)) == [0]

    def test_duplicate_edges_collapse(self):
        g = Graph(3, [(0, 1), (1, 0), (0, 1)])
        assert g.edge_count == 1

    def test_adjacency_matrix_symmetric(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        mat = g.adjacency().toarray()
        assert (mat == mat.T).all()
        assert mat.sum() == 2 * g.edge_count


class TestGenerateBA:
    def test_n_less_than_m_rejected(self):
        with pytest.raises(InvalidArgumentError):
            generate_ba(3, 4)

    def test_seed_clique_only(self):
        g = generate_ba(4, 4, seed=0)
        assert g == complete_graph(4)

    def test_edge_count(self):
        # (n - m) * m growth edges on top of the m-clique.
        g = generate_ba(500, 4, seed=1)
        assert g.edge_count == (500 - 4) * 4 + 6

    def test_deterministic(self):
        a = generate_ba(300, 4, seed=42)
        b = generate_ba(300, 4, seed=42)
        assert a == b

    def test_handshake(self):
        g = generate_ba(400, 4, seed=7)
        assert degree_sequence(g).sum() == 2 * g.edge_count

    def test_degree_distribution_slope(self):
        # CCDF slope on log-log axes near -2 (density exponent 3); band
        # frozen from a 20-graph calibration at these parameters.
        slopes = []
        for seed in range(3):
            deg = degree_sequence(generate_ba(2000, 4, seed=seed))
            ks = np.arange(8, 101)
            ccdf = np.array([(deg >= k).mean() for k in ks])
            mask = ccdf > 0
            coeffs = np.polyfit(np.log(ks[mask]), np.log(ccdf[mask]), 1)
            slopes.append(coeffs[0])
        assert all(-2.5 < s < -1.5 for s in slopes)

    def test_m_one(self):
        g = generate_ba(50, 1, seed=3)
        assert g.edge_count == 49


class TestGenerateWS:
    def test_odd_k_rejected(self):
        with pytest.raises(InvalidArgumentError):
            generate_ws(10, 3, 0.1)

    def test_k_not_below_n_rejected(self):
        with pytest.raises(InvalidArgumentError):
            generate_ws(4, 4, 0.1)

    def test_bad_p_rejected(self):
        with pytest.raises(InvalidArgumentError):
            generate_ws(10, 4, 1.5)

    def test_pure_ring(self):
        g = generate_ws(10, 4, 0.0)
        assert (degree_sequence(g) == 4).all()
        assert g.has_edge(0, 1) and g.has_edge(0, 2) and g.has_edge(0, 8)

    @pytest.mark.parametrize("p", [0.0, 0.1, 0.5, 1.0])
    def test_edge_count_preserved(self, p):
        g = generate_ws(200, 4, p, seed=5)
        assert g.edge_count == 200 * 4 // 2

    def test_full_rewire_min_degree(self):
        # Each node keeps its originating stubs, so degree >= k/2.
        g = generate_ws(1000, 4, 1.0, seed=8)
        assert degree_sequence(g).min() >= 2

    def test_deterministic(self):
        assert generate_ws(300, 4, 0.3, seed=9) == generate_ws(300, 4, 0.3, seed=9)


class TestDegreeSequence:
    def test_complete_graph(self):
        assert (degree_sequence(complete_graph(4)) == 3).all()

    def test_ring(self):
        assert (degree_sequence(generate_ws(10, 4, 0.0)) == 4).all()


class TestBetweenness:
    def test_path_graph(self):
        g = Graph(3, [(0, 1), (1, 2)])
        assert betweenness(g).tolist() == [0.0, 2.0, 0.0]

    def test_complete_graph(self):
        assert betweenness(complete_graph(4)).tolist() == [0.0] * 4

    def test_disconnected_pairs_contribute_zero(self):
        g = Graph(5, [(0, 1), (1, 2), (3, 4)])
        assert betweenness(g).tolist() == [0.0, 2.0, 0.0, 0.0, 0.0]

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force_exactly(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 25))
        g = Graph(n, random_graph(n, 0.15, rng))
        assert betweenness(g, exact=True) == brute_force_betweenness(g)


class TestClustering:
    def test_complete_graph(self):
        assert clustering_coefficients(complete_graph(4)).tolist() == [1.0] * 4

    def test_star_graph(self):
        g = Graph(6, [(0, i) for i in range(1, 6)])
        assert clustering_coefficients(g).tolist() == [0.0] * 6

    def test_ring_k4(self):
        # Each node: 3 of the 6 neighbor pairs are linked.
        assert clustering_coefficients(generate_ws(10, 4, 0.0)).tolist() == [0.5] * 10

    def test_bounds(self):
        g = generate_ba(200, 3, seed=2)
        cc = clustering_coefficients(g)
        assert ((cc >= 0.0) & (cc <= 1.0)).all()


class TestMultiplex:
    def test_pairs_layers(self):
        net = build_multiplex(generate_ba(100, 4, seed=0), generate_ws(100, 4, 0.1, seed=1))
        assert net.node_count == 100

    def test_size_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            build_multiplex(generate_ba(100, 4, seed=0), generate_ws(99, 4, 0.1, seed=1))


class TestEdgeListIO:
    def test_round_trip(self, tmp_path):
        for layer, name in [
            (generate_ba(80, 4, seed=3), "a.edges"),
            (generate_ws(80, 4, 0.1, seed=4), "b.edges"),
        ]:
            path = tmp_path / name
            write_edge_list(layer, path)
            assert read_edge_list(path) == layer

    def test_header_format(self, tmp_path):
        path = tmp_path / "g.edges"
        write_edge_list(Graph(3, [(1, 2)]), path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# nodes=3"
        assert lines[1] == "1 2"

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("0 1\n")
        with pytest.raises(InvalidArgumentError):
            read_edge_list(path)
