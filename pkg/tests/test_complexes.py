import numpy as np
import pytest

from hodgeq import (
    Graph,
    OrientedSimplex,
    betti_number,
    boundary_matrix,
    build_clique_complex,
    hodge_laplacian,
    hodge_projectors,
    read_edge_list,
)
from hodgeq.fixtures import (
    complete_graph,
    hollow_triangle_complex,
    path_complex,
    path_graph,
    random_er_graph,
    triangle_complex,
)


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(n=3, edges=frozenset({(1, 1)}))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="canonical"):
            Graph(n=2, edges=frozenset({(0, 2)}))

    def test_from_edges_canonicalizes(self):
        g = Graph.from_edges(3, [(2, 0), (1, 0)])
        assert g.edges == frozenset({(0, 2), (0, 1)})


class TestCliqueEnumeration:
    def test_k3_counts(self):
        assert triangle_complex().counts == [3, 3, 1]

    def test_path_has_no_triangle(self):
        assert path_complex(3, 2).n_simplices(2) == 0

    def test_k5_has_five_tetrahedra(self):
        cx = build_clique_complex(complete_graph(5), 3)
        assert cx.n_simplices(3) == 5

    def test_k5_against_brute_force(self):
        from itertools import combinations

        g = complete_graph(5)
        cx = build_clique_complex(g, 3)
        for k in range(4):
            expected = [
                c
                for c in combinations(range(5), k + 1)
                if all((u, v) in g.edges for u, v in combinations(c, 2))
            ]
            assert [s.vertices for s in cx.simplices[k]] == expected

    def test_random_against_brute_force(self):
        from itertools import combinations

        for seed in range(5):
            g = random_er_graph(7, 0.5, seed)
            cx = build_clique_complex(g, 3)
            for k in range(4):
                expected = sorted(
                    c
                    for c in combinations(range(7), k + 1)
                    if all((u, v) in g.edges for u, v in combinations(c, 2))
                )
                assert [s.vertices for s in cx.simplices[k]] == expected

    def test_max_dim_out_of_range(self):
        with pytest.raises(ValueError, match="max_dim"):
            build_clique_complex(path_graph(3), 5)

    def test_lexicographic_index(self):
        cx = triangle_complex()
        assert [s.vertices for s in cx.simplices[1]] == [(0, 1), (0, 2), (1, 2)]
        assert cx.index[1][(0, 2)] == 1


class TestOrientedSimplex:
    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            OrientedSimplex((2, 1))

    def test_face_signs_alternate(self):
        faces = list(OrientedSimplex((0, 1, 2)).faces())
        assert faces == [
            (1, OrientedSimplex((1, 2))),
            (-1, OrientedSimplex((0, 2))),
            (1, OrientedSimplex((0, 1))),
        ]


class TestBoundaryMatrix:
    def test_k2_single_edge(self):
        cx = build_clique_complex(path_graph(2), 1)
        b1 = boundary_matrix(cx, 1).toarray()
        assert b1.tolist() == [[-1.0], [1.0]]

    def test_k3_triangle_column(self):
        b2 = boundary_matrix(triangle_complex(), 2).toarray()
        # edge order ([0,1],[0,2],[1,2])
        assert b2[:, 0].tolist() == [1.0, -1.0, 1.0]

    def test_boundary_squared_zero_k3(self):
        cx = triangle_complex()
        prod = boundary_matrix(cx, 1).tocsr() @ boundary_matrix(cx, 2).tocsr()
        assert prod.nnz == 0 or abs(prod).max() == 0

    def test_boundary_squared_zero_random(self):
        for seed in range(10):
            g = random_er_graph(9, 0.5, 1000 + seed)
            cx = build_clique_complex(g, min(3, g.n - 1))
            for k in range(2, cx.max_dim + 1):
                if cx.n_simplices(k) == 0:
                    continue
                prod = (
                    boundary_matrix(cx, k - 1).tocsr()
                    @ boundary_matrix(cx, k).tocsr()
                )
                assert prod.nnz == 0 or abs(prod).max() == 0

    def test_column_weights(self):
        # Every column of B_k has exactly k+1 entries, all +-1.
        cx = build_clique_complex(complete_graph(5), 3)
        for k in range(1, 4):
            b = boundary_matrix(cx, k)
            arr = b.toarray()
            assert np.all(np.abs(arr).sum(axis=0) == k + 1)
            assert set(np.unique(b.values)) <= {-1, 1}

    def test_rejects_k_zero(self):
        with pytest.raises(ValueError):
            boundary_matrix(triangle_complex(), 0)


class TestHodgeLaplacian:
    def test_l0_is_graph_laplacian_of_k3(self):
        lap, _, _ = hodge_laplacian(triangle_complex(), 0)
        expected = np.array([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], dtype=float)
        assert np.array_equal(lap, expected)

    def test_l1_definition(self):
        cx = triangle_complex()
        b1 = boundary_matrix(cx, 1).toarray()
        b2 = boundary_matrix(cx, 2).toarray()
        lap, lower, upper = hodge_laplacian(cx, 1)
        assert np.allclose(lower, b1.T @ b1)
        assert np.allclose(upper, b2 @ b2.T)
        assert np.allclose(lap, lower + upper)

    def test_symmetric_psd(self):
        for seed in range(5):
            cx = build_clique_complex(random_er_graph(8, 0.5, 2000 + seed), 2)
            for k in range(3):
                if cx.n_simplices(k) == 0:
                    continue
                lap, _, _ = hodge_laplacian(cx, k)
                assert np.allclose(lap, lap.T)
                assert np.linalg.eigvalsh(lap).min() >= -1e-10


class TestHodgeProjectors:
    def test_k3_curl_direction(self):
        p_grad, p_curl, _ = hodge_projectors(triangle_complex(), 1)
        s = np.array([1.0, -1.0, 1.0])
        assert np.allclose(p_curl @ s, s, atol=1e-12)
        assert np.allclose(p_grad @ s, 0.0, atol=1e-12)

    def test_trace_of_harmonic_is_betti(self):
        for cx, k in [
            (triangle_complex(), 1),
            (hollow_triangle_complex(), 1),
            (path_complex(4), 1),
            (build_clique_complex(random_er_graph(7, 0.4, 7), 2), 1),
        ]:
            _, _, p_harm = hodge_projectors(cx, k)
            assert round(np.trace(p_harm)) == betti_number(cx, k)

    def test_hollow_triangle_harmonic_dim(self):
        _, _, p_harm = hodge_projectors(hollow_triangle_complex(), 1)
        assert abs(np.trace(p_harm) - 1.0) < 1e-10

    def test_idempotent_orthogonal_complete(self):
        for seed in range(5):
            cx = build_clique_complex(random_er_graph(7, 0.6, 3000 + seed), 2)
            if cx.n_simplices(1) == 0:
                continue
            pg, pc, ph = hodge_projectors(cx, 1)
            for p in (pg, pc, ph):
                assert np.allclose(p @ p, p, atol=1e-10)
            assert np.allclose(pg @ pc, 0.0, atol=1e-10)
            assert np.allclose(pg + pc + ph, np.eye(len(pg)), atol=1e-10)

    def test_norm_decomposition(self):
        rng = np.random.default_rng(11)
        cx = build_clique_complex(random_er_graph(8, 0.6, 42), 2)
        pg, pc, ph = hodge_projectors(cx, 1)
        for _ in range(20):
            s = rng.standard_normal(cx.n_simplices(1))
            total = sum(np.linalg.norm(p @ s) ** 2 for p in (pg, pc, ph))
            assert abs(total - np.linalg.norm(s) ** 2) <= 1e-10 * np.linalg.norm(s) ** 2


class TestBetti:
    def test_connected_beta0(self):
        assert betti_number(path_complex(5, 1), 0) == 1

    def test_hollow_triangle_beta1(self):
        assert betti_number(hollow_triangle_complex(), 1) == 1

    def test_filled_triangle_beta1(self):
        assert betti_number(triangle_complex(), 1) == 0

    def test_against_eigendecomposition(self):
        for seed in range(5):
            cx = build_clique_complex(random_er_graph(8, 0.4, 4000 + seed), 2)
            for k in range(3):
                if cx.n_simplices(k) == 0:
                    continue
                lap, _, _ = hodge_laplacian(cx, k)
                w = np.linalg.eigvalsh(lap)
                nullity = int(np.count_nonzero(w <= 1e-9 * max(w.max(), 1.0)))
                assert betti_number(cx, k) == nullity


class TestEdgeListIO:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("# comment\n0 1\n1 2  # trailing\n\n")
        g = read_edge_list(p)
        assert g.n == 3 and g.edges == frozenset({(0, 1), (1, 2)})

    def test_n_override(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("n 5\n0 1\n")
        assert read_edge_list(p).n == 5

    def test_error_carries_line_number(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("0 1\n0 x\n")
        with pytest.raises(ValueError, match=":2:"):
            read_edge_list(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("# nothing\n")
        with pytest.raises(ValueError, match="empty"):
            read_edge_list(p)
