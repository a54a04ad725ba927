import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hodgerank import Graph, build_clique_complex, gen_erdos_renyi, gen_special
from hodgerank.complex import euler_characteristic, laplacian
from hodgerank.topology import (betti, betti_numbers, density_sweep, harmonic_fraction,
                                kahle_thresholds, read_sweep_csv, write_sweep_csv)

from conftest import dense_kernel_dim


def nx_components(c):
    h = nx.Graph()
    h.add_nodes_from(range(c.n_vertices))
    h.add_edges_from(c.edges.tolist())
    return nx.number_connected_components(h)


def dense_betti(c, p):
    """dim ker of the dense Laplacian via its singular values."""
    if c.n_simplices(p) == 0:
        return 0
    return dense_kernel_dim(laplacian(c, p).to_dense())


class TestKnownComplexes:
    @pytest.mark.parametrize("kind,n,want", [
        ("complete", 5, (1, 0, 4)),   # K5 2-skeleton: chi = 5 = 1 - 0 + 4
        ("cycle", 4, (1, 1, 0)),
        ("cycle", 3, (1, 0, 0)),      # filled triangle
        ("path", 6, (1, 0, 0)),
        ("wheel", 8, (1, 0, 0)),
        ("star", 5, (1, 0, 0)),
    ])
    def test_betti(self, kind, n, want):
        c = build_clique_complex(gen_special(kind, n))
        assert betti_numbers(c) == want
        assert want[0] - want[1] + want[2] == euler_characteristic(c)

    def test_octahedron(self):
        # boundary of the octahedron: a 2-sphere built from cliques
        edges = [(i, j) for i in range(6) for j in range(i + 1, 6) if j != i + 3]
        c = build_clique_complex(Graph(6, edges))
        assert c.counts == (6, 12, 8)
        assert betti_numbers(c) == (1, 0, 1)

    def test_two_holes(self):
        # two squares sharing a vertex
        c = build_clique_complex(Graph(7, [(0, 1), (1, 2), (2, 3), (0, 3), (3, 4), (4, 5), (5, 6), (3, 6)]))
        assert betti_numbers(c) == (1, 2, 0)

    def test_isolated_vertices(self):
        c = build_clique_complex(Graph(5, [(0, 1)]))
        assert betti(c, 0) == 4

    def test_empty_levels(self):
        c = build_clique_complex(Graph(3, []))
        assert betti_numbers(c) == (3, 0, 0)


class TestOracles:
    @pytest.mark.parametrize("seed", range(8))
    @pytest.mark.parametrize("p", [0.04, 0.1, 0.3])
    def test_laplacian_stacked_dense(self, seed, p):
        c = build_clique_complex(gen_erdos_renyi(30, p, seed))
        b1 = betti(c, 1)
        assert b1 == betti(c, 1, method="stacked") == dense_betti(c, 1)
        assert betti(c, 0) == nx_components(c)
        b = betti_numbers(c)
        assert b[0] - b[1] + b[2] == euler_characteristic(c)

    def test_stacked_only_for_p1(self, k5):
        with pytest.raises(ValueError):
            betti(k5, 2, method="stacked")

    def test_bad_p(self, k5):
        with pytest.raises(ValueError):
            betti(k5, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 16), st.floats(0.0, 1.0), st.integers(0, 2**31 - 1))
def test_euler_poincare_property(n, p, seed):
    c = build_clique_complex(gen_erdos_renyi(n, p, seed))
    b = betti_numbers(c)
    assert b[0] - b[1] + b[2] == euler_characteristic(c)
    assert b[1] == betti(c, 1, method="stacked")


class TestHarmonicFraction:
    def test_c4_circulation(self, c4):
        # unit circulation, written on on the canonical edges (0,1),(0,3),(1,2),(2,3)
        frac = harmonic_fraction(c4, np.array([1.0, -1.0, 1.0, 1.0]))
        assert frac == pytest.approx(1.0)

    def test_filled_complex_has_none(self, k5):
        omega = np.random.default_rng(0).standard_normal(10)
        assert harmonic_fraction(k5, omega) <= 1e-8

    def test_zero_cochain(self, k5):
        with pytest.raises(ValueError):
            harmonic_fraction(k5, np.zeros(10))


class TestKahle:
    def test_n64(self):
        t = kahle_thresholds(64)
        assert t == {"lower": 1 / 64, "mid": 1 / 8, "upper": pytest.approx(1 / 4)}

    def test_ordered(self):
        for n in (10, 50, 1000):
            t = kahle_thresholds(n)
            assert t["lower"] < t["mid"] < t["upper"]

    def test_small_n(self):
        with pytest.raises(ValueError):
            kahle_thresholds(1)


class TestSweep:
    def test_deterministic_and_order_independent(self):
        a = density_sweep(20, [0.1, 0.5], 2, seed=3)
        b = density_sweep(20, [0.1, 0.5], 2, seed=3)
        assert a == b
        c = density_sweep(20, [0.1], 2, seed=3)
        assert c == a[:2]

    def test_rows(self):
        rows = density_sweep(15, [0.2, 0.9], 3, seed=1)
        assert len(rows) == 6
        assert all(0.0 <= r.harmonic_fraction <= 1.0 + 1e-12 for r in rows)
        assert all(r.betti1 >= 0 for r in rows)

    def test_ba_family(self):
        rows = density_sweep(20, [0.2], 2, seed=0, family="ba")
        assert all(r.n1 == 2 * (20 - 2) for r in rows)

    def test_bad_density(self):
        with pytest.raises(ValueError):
            density_sweep(10, [1.5], 1)

    def test_csv_round_trip(self, tmp_path):
        rows = density_sweep(12, [0.3], 2, seed=0)
        path = tmp_path / "s.csv"
        write_sweep_csv(path, rows)
        assert read_sweep_csv(path) == rows
        import json
        meta = json.loads((tmp_path / "s.csv.thresholds.json").read_text())
        assert meta["thresholds"]["lower"] == pytest.approx(1 / 12)
