import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hodgerank import build_clique_complex
from hodgerank.generators import (ProblemInstance, gen_barabasi_albert, gen_erdos_renyi,
                                  gen_instance, gen_special, gen_watts_strogatz, random_harmonic,
                                  rng_from)


class TestErdosRenyi:
    def test_extremes(self):
        assert gen_erdos_renyi(10, 0.0, 1).n_edges == 0
        assert gen_erdos_renyi(10, 1.0, 1).n_edges == 45

    def test_deterministic(self):
        assert gen_erdos_renyi(50, 0.1, 7).edges == gen_erdos_renyi(50, 0.1, 7).edges
        assert gen_erdos_renyi(50, 0.1, 7).edges != gen_erdos_renyi(50, 0.1, 8).edges

    def test_mean_edge_count(self):
        counts = [gen_erdos_renyi(100, 0.1, s).n_edges for s in range(40)]
        # binomial(4950, 0.1): mean 495, sd ~21; the mean of 40 has sd ~3.3
        assert abs(np.mean(counts) - 495) < 15

    def test_bad_p(self):
        with pytest.raises(ValueError):
            gen_erdos_renyi(5, 1.2)


class TestWattsStrogatz:
    @pytest.mark.parametrize("n,k", [(100, 10), (1000, 10), (30, 4)])
    @pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
    def test_edge_count(self, n, k, p):
        assert gen_watts_strogatz(n, k, p, 2).n_edges == n * k // 2

    def test_ring_lattice(self):
        g = gen_watts_strogatz(10, 4, 0.0, 0)
        assert all(d == 4 for d in g.degrees())

    def test_deterministic(self):
        assert gen_watts_strogatz(60, 6, 0.3, 4).edges == gen_watts_strogatz(60, 6, 0.3, 4).edges

    @pytest.mark.parametrize("k", [3, -2, 10])
    def test_bad_k(self, k):
        with pytest.raises(ValueError):
            gen_watts_strogatz(10, k)


class TestBarabasiAlbert:
    @pytest.mark.parametrize("n,m", [(100, 5), (1000, 20), (10, 1), (50, 49)])
    def test_edge_count(self, n, m):
        assert gen_barabasi_albert(n, m, 3).n_edges == m * (n - m)

    def test_connected(self):
        g = gen_barabasi_albert(200, 2, 1)
        h = nx.Graph(g.edges)
        assert nx.is_connected(h) and h.number_of_nodes() == 200

    def test_heavy_tail(self):
        deg = np.asarray(gen_barabasi_albert(2000, 2, 0).degrees())
        er = np.asarray(gen_erdos_renyi(2000, 4 / 1999, 0).degrees())
        assert deg.max() > 4 * er.max()

    def test_bad_m(self):
        with pytest.raises(ValueError):
            gen_barabasi_albert(5, 5)


class TestSpecial:
    @pytest.mark.parametrize("kind,n,n1", [("path", 6, 5), ("cycle", 6, 6), ("star", 6, 5),
                                           ("wheel", 6, 10), ("complete", 6, 15)])
    def test_counts(self, kind, n, n1):
        assert gen_special(kind, n).n_edges == n1

    def test_isomorphic_to_networkx(self):
        pairs = [("path", nx.path_graph(7)), ("cycle", nx.cycle_graph(7)), ("star", nx.star_graph(6)),
                 ("wheel", nx.wheel_graph(7)), ("complete", nx.complete_graph(7))]
        for kind, ref in pairs:
            assert nx.is_isomorphic(nx.Graph(gen_special(kind, 7).edges), ref)

    @pytest.mark.parametrize("kind,n", [("path", 1), ("cycle", 2), ("wheel", 3), ("blob", 5)])
    def test_invalid(self, kind, n):
        with pytest.raises(ValueError):
            gen_special(kind, n)


class TestInstances:
    def test_parts_sum_to_omega(self):
        c = build_clique_complex(gen_erdos_renyi(40, 0.15, 1))
        inst = gen_instance(c, 5)
        np.testing.assert_allclose(inst.true_grad + inst.true_curl + inst.true_harmonic, inst.omega,
                                   atol=1e-12)

    def test_harmonic_is_harmonic(self):
        c = build_clique_complex(gen_special("cycle", 12))
        h, ok = random_harmonic(c, rng_from(0))
        assert ok and np.linalg.norm(h) > 0
        assert np.linalg.norm(c.boundary_1 @ h) <= 1e-8 * np.linalg.norm(h)

    def test_trivial_homology_gives_zero(self, k5):
        h, ok = random_harmonic(k5, rng_from(0))
        assert ok and not np.any(h)

    def test_no_harmonic_mode(self):
        c = build_clique_complex(gen_special("cycle", 8))
        assert not np.any(gen_instance(c, 0, harmonic_mode="none").true_harmonic)

    def test_deterministic(self, k5):
        a, b = gen_instance(k5, 3), gen_instance(k5, 3)
        np.testing.assert_array_equal(a.omega, b.omega)

    def test_save_load(self, tmp_path, k5):
        inst = gen_instance(k5, 1)
        inst.save(tmp_path / "i.json")
        back = ProblemInstance.load(tmp_path / "i.json")
        np.testing.assert_array_equal(back.omega, inst.omega)
        np.testing.assert_array_equal(back.complex.edges, inst.complex.edges)

    def test_bad_mode(self, k5):
        with pytest.raises(ValueError):
            gen_instance(k5, 0, harmonic_mode="other")


def test_rng_accepts_generator():
    g = np.random.default_rng(0)
    assert rng_from(g) is g


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 60), st.integers(0, 2**31 - 1), st.data())
def test_generated_graphs_are_simple(n, seed, data):
    m = data.draw(st.integers(1, n - 1))
    k = 2 * data.draw(st.integers(0, (n - 1) // 2))
    for g in (gen_barabasi_albert(n, m, seed), gen_watts_strogatz(n, k, 0.5, seed),
              gen_erdos_renyi(n, 0.3, seed)):
        keys = {frozenset(e) for e in g.edges}
        assert len(keys) == g.n_edges
        assert all(len(e) == 2 for e in keys)
