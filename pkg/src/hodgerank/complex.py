"""Oriented clique 2-complexes, their boundary matrices and Hodge Laplacians.

Simplices are stored with the canonical orientation given by increasing
vertex index. An edge ``(i, j)`` with ``i < j`` runs from ``i`` to ``j``, so
``boundary_1`` puts -1 on the tail and +1 on the head, and a 1-cochain value
on that edge reads as "how much ``j`` is preferred over ``i``".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components

from .exceptions import DimensionError, StructuralInputError
from .sparse import SparseMat, add, gram

__all__ = [
    "Graph",
    "Complex2",
    "build_clique_complex",
    "boundary_1",
    "boundary_2",
    "laplacian_0",
    "laplacian_1",
    "laplacian_2",
    "euler_characteristic",
    "edge_cochain",
    "read_edge_list",
    "write_edge_list",
]


@dataclass(frozen=True)
class Graph:
    """Simple graph with oriented edges ``(tail, head)``, 0-based."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        self.validate()

    def validate(self):
        if self.n_vertices < 0:
            raise StructuralInputError("negative vertex count")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise StructuralInputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise StructuralInputError(f"edge ({u}, {v}) out of range for {self.n_vertices} vertices")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise StructuralInputError(f"duplicate edge {{{u}, {v}}}")
            seen.add(key)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True, eq=False)
class Complex2:
    """Clique 2-complex with canonically oriented edges and triangles."""

    n_vertices: int
    edges: np.ndarray  # (N1, 2), rows i < j, lexicographically increasing
    triangles: np.ndarray  # (N2, 3), rows i < j < k, lexicographically increasing
    edge_index: dict = field(repr=False)
    triangle_index: dict = field(repr=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.n_vertices, self.n_edges, self.n_triangles

    def n_simplices(self, p: int) -> int:
        return self.counts[p]

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n_vertices) if self.n_edges \
            else np.zeros(self.n_vertices, dtype=np.int64)

    @cached_property
    def boundary_1(self) -> SparseMat:
        return boundary_1(self)

    @cached_property
    def boundary_2(self) -> SparseMat:
        return boundary_2(self)

    def components(self) -> tuple[int, np.ndarray]:
        """Number of connected components and a label per vertex."""
        adj = self.boundary_1.to_scipy()
        adj = abs(adj) @ abs(adj).T
        return connected_components(adj, directed=False)

    def as_graph(self) -> Graph:
        return Graph(self.n_vertices, [tuple(e) for e in self.edges.tolist()])

    def check(self):
        """Assert the closure and ordering invariants; raises on violation."""
        e, t = self.edges, self.triangles
        if len(e) and not np.all(e[:, 0] < e[:, 1]):
            raise StructuralInputError("edges not canonically oriented")
        if len(e) > 1 and not np.all(np.diff(e[:, 0] * (self.n_vertices + 1) + e[:, 1]) > 0):
            raise StructuralInputError("edges not strictly increasing")
        for tri in t.tolist():
            i, j, k = tri
            if not i < j < k:
                raise StructuralInputError(f"triangle {tri} not canonically oriented")
            for pair in ((i, j), (j, k), (i, k)):
                if pair not in self.edge_index:
                    raise StructuralInputError(f"triangle {tri} missing edge {pair}")


def _canonical_edges(g: Graph) -> np.ndarray:
    if not g.edges:
        return np.zeros((0, 2), dtype=np.int64)
    e = np.sort(np.asarray(g.edges, dtype=np.int64), axis=1)
    return e[np.lexsort((e[:, 1], e[:, 0]))]


def _triangles(n: int, edges: np.ndarray) -> np.ndarray:
    # for each edge (i, j) intersect the higher neighbourhoods of i and j
    higher = [[] for _ in range(n)]
    for i, j in edges.tolist():
        higher[i].append(j)
    higher = [np.asarray(h, dtype=np.int64) for h in higher]  # already sorted
    tris = []
    for i, j in edges.tolist():
        common = np.intersect1d(higher[i], higher[j], assume_unique=True)
        tris.extend((i, j, int(k)) for k in common)
    if not tris:
        return np.zeros((0, 3), dtype=np.int64)
    return np.asarray(tris, dtype=np.int64)


def build_clique_complex(g: Graph) -> Complex2:
    """Edges of ``g`` plus all its 3-cliques, canonically oriented."""
    if not isinstance(g, Graph):
        raise StructuralInputError("expected a Graph")
    g.validate()
    edges = _canonical_edges(g)
    tris = _triangles(g.n_vertices, edges)
    c = Complex2(
        n_vertices=g.n_vertices,
        edges=edges,
        triangles=tris,
        edge_index={(int(i), int(j)): k for k, (i, j) in enumerate(edges.tolist())},
        triangle_index={tuple(t): k for k, t in enumerate(tris.tolist())},
    )
    for arr in (c.edges, c.triangles):
        arr.setflags(write=False)
    c.check()
    return c


def boundary_1(c: Complex2) -> SparseMat:
    n1 = c.n_edges
    cols = np.repeat(np.arange(n1), 2)
    rows = c.edges.ravel()
    vals = np.tile([-1.0, 1.0], n1)
    return SparseMat.from_triplets(rows, cols, vals, (c.n_vertices, n1))


def boundary_2(c: Complex2) -> SparseMat:
    n2 = c.n_triangles
    rows = np.empty(3 * n2, dtype=np.int64)
    for k, (i, j, l) in enumerate(c.triangles.tolist()):
        rows[3 * k] = c.edge_index[(i, j)]
        rows[3 * k + 1] = c.edge_index[(j, l)]
        rows[3 * k + 2] = c.edge_index[(i, l)]
    cols = np.repeat(np.arange(n2), 3)
    vals = np.tile([1.0, 1.0, -1.0], n2)
    return SparseMat.from_triplets(rows, cols, vals, (c.n_edges, n2))


def laplacian_0(c: Complex2) -> SparseMat:
    return gram(c.boundary_1, "left")


def laplacian_1(c: Complex2) -> SparseMat:
    return add(gram(c.boundary_1, "right"), gram(c.boundary_2, "left"))


def laplacian_2(c: Complex2) -> SparseMat:
    return gram(c.boundary_2, "right")


def laplacian(c: Complex2, p: int) -> SparseMat:
    return (laplacian_0, laplacian_1, laplacian_2)[p](c)


def euler_characteristic(c: Complex2) -> int:
    return c.n_vertices - c.n_edges + c.n_triangles


def edge_cochain(c: Complex2, edges, values) -> np.ndarray:
    """1-cochain from values given on oriented edges ``(tail, head)``.

    Values on edges given against the canonical orientation are negated.
    Edges of ``c`` that are not listed get 0.
    """
    edges, values = list(edges), list(values)
    if len(edges) != len(values):
        raise DimensionError(f"{len(edges)} edges but {len(values)} values")
    omega = np.zeros(c.n_edges)
    for (u, v), w in zip(edges, values):
        u, v = int(u), int(v)
        key = (min(u, v), max(u, v))
        if key not in c.edge_index:
            raise StructuralInputError(f"edge ({u}, {v}) is not in the complex")
        omega[c.edge_index[key]] = w if u < v else -w
    return omega


def read_edge_list(path, weighted: bool = False):
    """Parse ``u v`` (or ``u v w``) lines; ``#`` starts a comment line.

    Returns a :class:`Graph`, plus the weight array when ``weighted``. The
    vertex count is one more than the largest index seen, or the value of a
    ``# vertices: N`` comment when present.
    """
    edges, weights = [], []
    n_declared = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip().lower()
            if body.startswith("vertices:"):
                n_declared = int(body.split(":", 1)[1])
            continue
        parts = line.split()
        need = 3 if weighted else 2
        if len(parts) < need:
            raise StructuralInputError(f"{path}:{lineno}: expected {need} columns, got {len(parts)}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if weighted else None
        except ValueError as exc:
            raise StructuralInputError(f"{path}:{lineno}: {exc}") from None
        if u < 0 or v < 0:
            raise StructuralInputError(f"{path}:{lineno}: negative vertex index")
        edges.append((u, v))
        weights.append(w)
    n = max((max(e) for e in edges), default=-1) + 1
    if n_declared is not None:
        n = max(n, n_declared)
    g = Graph(n, edges)
    if weighted:
        return g, np.asarray(weights, dtype=np.float64)
    return g


def write_edge_list(path, g: Graph, weights=None) -> None:
    lines = [f"# vertices: {g.n_vertices}"]
    if weights is None:
        lines.extend(f"{u} {v}" for u, v in g.edges)
    else:
        lines.extend(f"{u} {v} {float(w)!r}" for (u, v), w in zip(g.edges, np.asarray(weights, dtype=float)))
    Path(path).write_text("\n".join(lines) + "\n")
