import itertools

import numpy as np
import pytest

from hodgerank import Graph, build_clique_complex, gen_special


def dense_boundary_1(c):
    """Incidence matrix built entry by entry from the edge list."""
    d = np.zeros((c.n_vertices, c.n_edges))
    for k, (i, j) in enumerate(c.edges.tolist()):
        d[i, k] = -1.0
        d[j, k] = 1.0
    return d


def dense_boundary_2(c):
    d = np.zeros((c.n_edges, c.n_triangles))
    for t, tri in enumerate(c.triangles.tolist()):
        # sign of edge (a, b) in the boundary of (i, j, k) is (-1)^(position of omitted vertex)
        for omit in range(3):
            face = tuple(v for m, v in enumerate(tri) if m != omit)
            d[c.edge_index[face], t] = (-1.0) ** omit
    return d


def brute_triangles(g):
    adj = {frozenset(e) for e in g.edges}
    return [t for t in itertools.combinations(range(g.n_vertices), 3)
            if all(frozenset(p) in adj for p in itertools.combinations(t, 2))]


def dense_kernel_dim(m, rtol=None):
    m = np.atleast_2d(m)
    if m.size == 0:
        return m.shape[1]
    s = np.linalg.svd(m, compute_uv=False)
    tol = max(m.shape) * np.finfo(float).eps * (s[0] if len(s) else 0.0)
    return int(m.shape[1] - np.sum(s > tol))


@pytest.fixture
def k3():
    return build_clique_complex(gen_special("complete", 3))


@pytest.fixture
def k5():
    return build_clique_complex(gen_special("complete", 5))


@pytest.fixture
def c4():
    return build_clique_complex(gen_special("cycle", 4))


# Three oriented comparison triangles; A=0, B=1, C=2.
# Each edge (tail, head) carries how much head is preferred over tail.
TRIANGLE_EDGES = [(1, 0), (0, 2), (2, 1)]
TRIANGLE_VALUES = {
    "consistent": [1.0, -2.0, 1.0],
    "inconsistent": [1.0, -1.0, 1.0],
    "cyclic": [1.0, 1.0, 1.0],
}


@pytest.fixture
def triangle_complex():
    return build_clique_complex(Graph(3, TRIANGLE_EDGES))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
