"""Least-squares ranking as a Hodge decomposition of edge data.

Given a 1-cochain ``omega`` on a clique complex, two least-squares problems

    d1^T a ~ omega          (vertex potentials, the global ranking)
    d2 b   ~ omega - d1^T a (triangle potentials, the local inconsistency)

split ``omega`` into gradient, curl and harmonic parts. Each problem can be
solved in five equivalent ways: CG or MINRES on the normal equations, CG or
MINRES on the symmetric saddle-point (KKT) system, or LSQR on the
rectangular matrix directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .complex import Complex2, laplacian_0, laplacian_2
from .exceptions import DecompositionQualityError, DimensionError
from .krylov import SolveOptions, SolveReport, cg, lsqr, minres
from .sparse import SparseMat, assemble_kkt, gram, matvec, transpose

__all__ = [
    "METHODS",
    "HodgeResult",
    "solve_ranking",
    "solve_curl",
    "decompose",
    "consistency_check",
    "center_per_component",
    "ordinal_ranking",
    "default_curl_method",
]

METHODS = ("CG-NE", "MINRES-NE", "CG-KKT", "MINRES-KKT", "LSQR")
_ALIASES = {"CG": "CG-NE", "MINRES": "MINRES-NE", "CG-K": "CG-KKT", "MINRES-K": "MINRES-KKT"}

# LSQR beats CG on the normal equations once d2^T d2 has filled in this much
LSQR_FILL_RATIO = 8.0


def _method(name: str) -> str:
    key = name.strip().upper().replace("_", "-")
    key = _ALIASES.get(key, key)
    if key not in METHODS:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return key


def _solve_ls(a: SparseMat, normal: SparseMat | None, rhs, method: str, opts: SolveOptions):
    """Solve ``a x ~ rhs`` by ``method``; returns ``(x, report)``."""
    if method == "LSQR":
        return lsqr(a, rhs, opts)
    if method.endswith("-NE"):
        solver = cg if method == "CG-NE" else minres
        if normal is None:
            normal = gram(a, "right")
        return solver(normal, matvec(transpose(a), rhs), opts)
    solver = cg if method == "CG-KKT" else minres
    m, n = a.shape
    kkt = assemble_kkt(m, a, transpose(a))
    sol, rep = solver(kkt, np.concatenate([rhs, np.zeros(n)]), opts)
    return sol[m:], rep


def center_per_component(c: Complex2, alpha) -> np.ndarray:
    """Subtract the mean of ``alpha`` on each connected component."""
    alpha = np.asarray(alpha, dtype=float).copy()
    if c.n_vertices == 0:
        return alpha
    _, labels = c.components()
    sums = np.bincount(labels, weights=alpha)
    sizes = np.bincount(labels)
    alpha -= (sums / sizes)[labels]
    return alpha


def ordinal_ranking(alpha) -> list[int]:
    """Vertex ids by descending potential; ties keep ascending id order."""
    return [int(i) for i in np.argsort(-np.asarray(alpha), kind="stable")]


def _check_omega(c: Complex2, omega) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (c.n_edges,):
        raise DimensionError(f"edge cochain has shape {omega.shape}, expected ({c.n_edges},)")
    return omega


def solve_ranking(c: Complex2, omega, method: str = "CG-NE",
                  opts: SolveOptions = SolveOptions()) -> tuple[np.ndarray, SolveReport]:
    """Vertex potentials minimizing ``||omega - d1^T a||``, centered per component."""
    omega = _check_omega(c, omega)
    method = _method(method)
    d1t = transpose(c.boundary_1)
    normal = laplacian_0(c) if method.endswith("-NE") else None
    alpha, rep = _solve_ls(d1t, normal, omega, method, opts)
    return center_per_component(c, alpha), rep


def _empty_report(opts: SolveOptions, method: str) -> SolveReport:
    return SolveReport(0, True, 0.0, [1.0] if opts.record_history else None, 0.0, 0,
                       method.lower(), opts.tol)


def default_curl_method(c: Complex2) -> str:
    """CG on the normal equations unless ``d2^T d2`` is much denser than ``d2``."""
    if c.n_triangles == 0:
        return "CG-NE"
    fill = laplacian_2(c).nnz / c.boundary_2.nnz
    return "LSQR" if fill > LSQR_FILL_RATIO else "CG-NE"


def solve_curl(c: Complex2, x, method: str = "CG-NE",
               opts: SolveOptions = SolveOptions()) -> tuple[np.ndarray, SolveReport]:
    """Triangle potentials minimizing ``||x - d2 b||``.

    ``x`` may be the data itself or the residual of the first problem; the
    two give the same curl part because the gradient part is orthogonal to
    the range of ``d2``.
    """
    x = _check_omega(c, x)
    method = _method(method)
    if c.n_triangles == 0:
        return np.zeros(0), _empty_report(opts, method)
    normal = laplacian_2(c) if method.endswith("-NE") else None
    return _solve_ls(c.boundary_2, normal, x, method, opts)


@dataclass
class HodgeResult:
    alpha: np.ndarray
    beta: np.ndarray
    harmonic: np.ndarray
    grad_part: np.ndarray
    curl_part: np.ndarray
    norms: dict
    reports: dict
    methods: dict = field(default_factory=dict)

    @property
    def ranking(self) -> list[int]:
        return ordinal_ranking(self.alpha)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "harmonic": self.harmonic.tolist(),
            "norms": dict(self.norms),
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
            "methods": dict(self.methods),
            "ranking": self.ranking,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def decompose(c: Complex2, omega, method: str | None = None, opts: SolveOptions = SolveOptions(),
              curl_method: str | None = None, check_tol: float = 1e-6) -> HodgeResult:
    """``omega = d1^T alpha + d2 beta + h`` with ``h`` obtained by subtraction.

    ``method`` is used for the first problem and, unless ``curl_method`` is
    given, for the second. With neither given, the first problem uses CG on
    the normal equations and the second picks by matrix fill
    (``curl_method="auto"``).
    Raises :class:`DecompositionQualityError` if ``||d1 h||`` or
    ``||d2^T h||`` exceeds ``check_tol * ||omega||``.
    """
    omega = _check_omega(c, omega)
    if method is None:
        method = "CG-NE"
        curl_method = curl_method or "auto"
    method = _method(method)
    if curl_method is None:
        curl_method = method
    elif curl_method == "auto":
        curl_method = default_curl_method(c)
    curl_method = _method(curl_method)

    alpha, rep_a = solve_ranking(c, omega, method, opts)
    grad = matvec(transpose(c.boundary_1), alpha)
    residual = omega - grad
    beta, rep_b = solve_curl(c, residual, curl_method, opts)
    curl = matvec(c.boundary_2, beta) if c.n_triangles else np.zeros(c.n_edges)
    h = residual - curl

    wnorm = float(np.linalg.norm(omega))
    d1h = float(np.linalg.norm(matvec(c.boundary_1, h))) if c.n_edges else 0.0
    d2th = float(np.linalg.norm(matvec(transpose(c.boundary_2), h))) if c.n_triangles else 0.0
    norms = {
        "omega": wnorm,
        "grad": float(np.linalg.norm(grad)),
        "curl": float(np.linalg.norm(curl)),
        "harmonic": float(np.linalg.norm(h)),
        "d1_harmonic": d1h,
        "d2t_harmonic": d2th,
    }
    if d1h > check_tol * wnorm or d2th > check_tol * wnorm:
        raise DecompositionQualityError(
            f"harmonic part is not harmonic: ||d1 h|| = {d1h:.3e}, ||d2^T h|| = {d2th:.3e}, "
            f"||omega|| = {wnorm:.3e}", norms)
    return HodgeResult(alpha, beta, h, grad, curl, norms, {"alpha": rep_a, "beta": rep_b},
                       {"alpha": method, "beta": curl_method})


def consistency_check(c: Complex2, omega, tol: float = 1e-8) -> dict:
    """Edge data is consistent iff the first problem leaves no residual."""
    omega = _check_omega(c, omega)
    wnorm = float(np.linalg.norm(omega))
    if wnorm == 0.0:
        return {"consistent": True, "residual_norm": 0.0}
    alpha, _ = solve_ranking(c, omega, "CG-NE", SolveOptions(tol=min(1e-12, tol * 1e-3)))
    res = float(np.linalg.norm(omega - matvec(transpose(c.boundary_1), alpha)))
    return {"consistent": res <= tol * wnorm, "residual_norm": res}
