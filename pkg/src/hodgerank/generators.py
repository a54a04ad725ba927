"""Seeded random and special graph generators, and synthetic ranking instances.

Randomness comes from numpy's PCG64 generator. Every generator accepts either
an integer seed or an existing ``numpy.random.Generator``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complex import Complex2, Graph, build_clique_complex
from .exceptions import ConvergenceError, StructuralInputError
from .krylov import SolveOptions, lsqr
from .sparse import hstack, matvec, transpose

__all__ = [
    "rng_from",
    "gen_erdos_renyi",
    "gen_watts_strogatz",
    "gen_barabasi_albert",
    "gen_special",
    "ProblemInstance",
    "gen_instance",
]


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def gen_erdos_renyi(n: int, p: float, seed=None) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = rng_from(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph(n, list(zip(iu[keep].tolist(), ju[keep].tolist())))


def gen_watts_strogatz(n: int, k: int, p_rewire: float = 0.3, seed=None) -> Graph:
    """Ring lattice of even degree ``k`` with each edge rewired w.p. ``p_rewire``.

    Rewiring moves the far endpoint of ``(u, u + j)`` to a uniformly chosen
    vertex that is neither ``u`` nor already adjacent to it, so the edge count
    stays ``n * k / 2``.
    """
    if k % 2 or k < 0 or k >= n:
        raise ValueError("k must be even and satisfy 0 <= k < n")
    if not 0.0 <= p_rewire <= 1.0:
        raise ValueError("p_rewire must lie in [0, 1]")
    rng = rng_from(seed)
    adj = [set() for _ in range(n)]
    edges = {}
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
            edges[(u, j)] = v
    for j in range(1, k // 2 + 1):
        for u in range(n):
            if rng.random() >= p_rewire:
                continue
            if len(adj[u]) >= n - 1:
                continue
            old = edges[(u, j)]
            while True:
                w = int(rng.integers(n))
                if w != u and w not in adj[u]:
                    break
            adj[u].discard(old)
            adj[old].discard(u)
            adj[u].add(w)
            adj[w].add(u)
            edges[(u, j)] = w
    return Graph(n, sorted((min(u, v), max(u, v)) for (u, _), v in edges.items()))


def gen_barabasi_albert(n: int, m: int, seed=None) -> Graph:
    """Preferential attachment starting from ``m`` isolated vertices.

    Vertex ``m`` joins all of the initial vertices; every later vertex picks
    ``m`` distinct targets with probability proportional to degree. The
    result has exactly ``m * (n - m)`` edges.
    """
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    rng = rng_from(seed)
    edges = []
    repeated = []  # each vertex appears once per incident edge
    targets = list(range(m))
    for v in range(m, n):
        edges.extend((t, v) for t in targets)
        repeated.extend(targets)
        repeated.extend([v] * m)
        chosen = set()
        while len(chosen) < m:
            chosen.add(repeated[int(rng.integers(len(repeated)))])
        targets = sorted(chosen)
    return Graph(n, edges)


def gen_special(kind: str, n: int) -> Graph:
    """path, cycle, star (hub 0), wheel (hub 0, rim 1..n-1) or complete."""
    if kind == "path":
        if n < 2:
            raise ValueError("path needs n >= 2")
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if n < 3:
        raise ValueError(f"{kind} needs n >= 3")
    if kind == "cycle":
        return Graph(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])
    if kind == "star":
        return Graph(n, [(0, i) for i in range(1, n)])
    if kind == "wheel":
        if n < 4:
            raise ValueError("wheel needs n >= 4")
        rim = [(i, i + 1) for i in range(1, n - 1)] + [(1, n - 1)]
        return Graph(n, [(0, i) for i in range(1, n)] + rim)
    if kind == "complete":
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    raise ValueError(f"unknown special graph kind {kind!r}")


@dataclass
class ProblemInstance:
    complex: Complex2
    omega: np.ndarray
    true_alpha: np.ndarray
    true_beta: np.ndarray
    true_harmonic: np.ndarray
    harmonic_ok: bool = True

    @property
    def true_grad(self) -> np.ndarray:
        return matvec(transpose(self.complex.boundary_1), self.true_alpha)

    @property
    def true_curl(self) -> np.ndarray:
        return matvec(self.complex.boundary_2, self.true_beta)

    def to_dict(self) -> dict:
        return {
            "n_vertices": self.complex.n_vertices,
            "edges": self.complex.edges.tolist(),
            "omega": self.omega.tolist(),
            "true_alpha": self.true_alpha.tolist(),
            "true_beta": self.true_beta.tolist(),
            "true_harmonic": self.true_harmonic.tolist(),
            "harmonic_ok": bool(self.harmonic_ok),
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "ProblemInstance":
        d = json.loads(Path(path).read_text())
        c = build_clique_complex(Graph(d["n_vertices"], [tuple(e) for e in d["edges"]]))
        return cls(c, np.asarray(d["omega"]), np.asarray(d["true_alpha"]),
                   np.asarray(d["true_beta"]), np.asarray(d["true_harmonic"]),
                   d.get("harmonic_ok", True))


def random_harmonic(c: Complex2, rng, tol: float = 1e-12) -> tuple[np.ndarray, bool]:
    """Least-squares residual of ``[d1^T d2] x ~ rho`` for uniform random ``rho``.

    The residual lies in ``ker d1 ∩ ker d2^T``. A residual below
    ``1e-8 ||rho||`` is reported as exactly zero (trivial 1-homology).
    """
    rho = rng.uniform(-1.0, 1.0, c.n_edges)
    if c.n_edges == 0:
        return rho, True
    stacked = hstack(transpose(c.boundary_1), c.boundary_2)
    x, rep = lsqr(stacked, rho, SolveOptions(tol=tol, max_iter=20 * stacked.n_cols + 100))
    if not rep.converged:
        raise ConvergenceError("LSQR did not converge while building a harmonic cochain", rep)
    h = rho - matvec(stacked, x)
    hnorm = np.linalg.norm(h)
    if hnorm <= 1e-8 * np.linalg.norm(rho):
        return np.zeros(c.n_edges), True
    ok = bool(np.linalg.norm(matvec(c.boundary_1, h)) <= 1e-8 * hnorm
              and np.linalg.norm(matvec(transpose(c.boundary_2), h)) <= 1e-8 * hnorm)
    return h, ok


def gen_instance(c: Complex2, seed=None, harmonic_mode: str = "lsq_residual") -> ProblemInstance:
    """Random ``omega = d1^T alpha + d2 beta + h`` with known parts.

    ``alpha`` and ``beta`` are i.i.d. uniform on [-1, 1]. ``harmonic_mode``
    is ``"lsq_residual"`` (random harmonic part) or ``"none"``.
    """
    if harmonic_mode not in ("lsq_residual", "none"):
        raise ValueError(f"unknown harmonic_mode {harmonic_mode!r}")
    if not isinstance(c, Complex2):
        raise StructuralInputError("expected a Complex2")
    rng = rng_from(seed)
    alpha = rng.uniform(-1.0, 1.0, c.n_vertices)
    beta = rng.uniform(-1.0, 1.0, c.n_triangles)
    if harmonic_mode == "none":
        h, ok = np.zeros(c.n_edges), True
    else:
        h, ok = random_harmonic(c, rng)
    omega = matvec(transpose(c.boundary_1), alpha) + matvec(c.boundary_2, beta) + h
    return ProblemInstance(c, omega, alpha, beta, h, ok)
