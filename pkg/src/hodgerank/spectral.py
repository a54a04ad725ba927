"""Extreme eigenvalues of graph Laplacians and CG iteration bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .complex import Complex2
from .exceptions import ConvergenceError
from .sparse import SparseMat

__all__ = [
    "SpectralSummary",
    "extreme_eigs",
    "kernel_dimension",
    "special_lambda_min",
    "special_lambda_max",
    "lambda_max_bound",
    "cg_iteration_bound",
]

DENSE_THRESHOLD = 400
MAX_LANCZOS_BLOCK = 128


@dataclass(frozen=True)
class SpectralSummary:
    lambda_max: float
    lambda_min_nonzero: float
    kernel_dim: int
    kappa: float
    zero_tol: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def zero_tolerance(n: int, lambda_max: float) -> float:
    return max(n, 10) * np.finfo(float).eps * lambda_max


def _summary(eigs, n) -> SpectralSummary:
    eigs = np.sort(np.asarray(eigs, dtype=float))
    lmax = float(max(eigs[-1], 0.0)) if len(eigs) else 0.0
    tol = zero_tolerance(n, lmax)
    nonzero = eigs[eigs > tol]
    kdim = int(np.sum(eigs <= tol))
    lmin = float(nonzero[0]) if len(nonzero) else float("nan")
    kappa = lmax / lmin if len(nonzero) else float("nan")
    return SpectralSummary(lmax, lmin, kdim, kappa, tol, n)


def _sparse_extremes(a: SparseMat, max_restarts: int) -> SpectralSummary:
    """Lanczos for the top; deflated shift-invert Lanczos for the bottom.

    Lanczos cannot resolve a repeated eigenvalue from one start vector, so
    the kernel is found a few vectors at a time: every kernel vector found
    is moved to ``2 lambda_max`` by a rank-k update (applied through the
    Woodbury identity), and the search repeats until the smallest remaining
    eigenvalue is nonzero. A kernel vector still missed would be the top
    eigenvalue of the inverted operator, so a pass that finds none ends it.
    """
    n = a.n_rows
    m = a.to_scipy().tocsc()
    try:
        lmax = float(spla.eigsh(m, k=1, which="LA", return_eigenvectors=False, tol=1e-12)[0])
        tol = zero_tolerance(n, lmax)
        shift = 1e-3 * lmax
        lu = spla.splu((m + shift * sps.identity(n, format="csc")).tocsc())
        big = 2.0 * lmax
        basis = np.zeros((n, 0))
        for _ in range(max_restarts):
            if basis.shape[1]:
                minv_v = lu.solve(basis)
                small = np.eye(basis.shape[1]) / big + basis.T @ minv_v

                def apply(x, minv_v=minv_v, small=small):
                    y = lu.solve(np.asarray(x, dtype=float).ravel())
                    return y - minv_v @ np.linalg.solve(small, minv_v.T @ np.asarray(x).ravel())
            else:
                def apply(x):
                    return lu.solve(np.asarray(x, dtype=float).ravel())
            k = max(8, 2 * basis.shape[1])
            if k > min(n // 2, MAX_LANCZOS_BLOCK):
                break  # kernel too large for Lanczos to pay off; go dense
            op = spla.LinearOperator((n, n), matvec=apply, dtype=float)
            _, vecs = spla.eigsh(op, k=k, which="LA", tol=1e-12)
            # Rayleigh quotients with the original matrix are accurate near zero
            lams = np.einsum("ij,ij->j", vecs, m @ vecs)
            zero = lams <= tol
            if np.any(zero):
                basis, _ = np.linalg.qr(np.column_stack([basis, vecs[:, zero]]))
                continue
            if len(lams):
                lmin = float(lams.min())
                kdim = basis.shape[1]
                return SpectralSummary(lmax, lmin, kdim, lmax / lmin, tol, n)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"eigen-iteration did not converge: {exc}") from exc
    return _summary(np.linalg.eigvalsh(a.to_dense()), n)


def extreme_eigs(a: SparseMat, dense_threshold: int = DENSE_THRESHOLD,
                 max_restarts: int = 12) -> SpectralSummary:
    """Largest eigenvalue, smallest nonzero eigenvalue and kernel dimension.

    ``a`` must be symmetric positive semidefinite. Eigenvalues at or below
    ``max(n, 10) * eps * lambda_max`` count as zero. Matrices with at most
    ``dense_threshold`` rows are handled by a dense eigensolver; larger ones
    by Lanczos, with shift-invert for the low end of the spectrum.
    """
    n = a.n_rows
    if a.n_cols != n:
        raise ValueError("extreme_eigs needs a square matrix")
    if n == 0:
        return SpectralSummary(0.0, float("nan"), 0, float("nan"), 0.0, 0)
    if n <= max(dense_threshold, 3) or a.nnz == 0:
        return _summary(np.linalg.eigvalsh(a.to_dense()), n)
    return _sparse_extremes(a, max_restarts)


def kernel_dimension(a: SparseMat, dense_threshold: int = DENSE_THRESHOLD) -> int:
    return extreme_eigs(a, dense_threshold).kernel_dim


def special_lambda_min(kind: str, n: int, edge_connectivity: int | None = None) -> float:
    """Closed forms (or, for ``general``, a lower bound) for the smallest
    nonzero Laplacian eigenvalue of a connected graph on ``n`` vertices."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if kind == "path":
        return 2.0 * (1.0 - math.cos(math.pi / n))
    if kind == "cycle":
        return 2.0 * (1.0 - math.cos(2.0 * math.pi / n))
    if kind == "star":
        return 1.0
    if kind == "complete":
        return float(n)
    if kind == "general":
        if edge_connectivity is None:
            raise ValueError("kind='general' needs the edge connectivity")
        return 2.0 * edge_connectivity * (1.0 - math.cos(math.pi / n))
    raise ValueError(f"unknown graph kind {kind!r}")


def special_lambda_max(kind: str, n: int) -> float:
    """Known largest Laplacian eigenvalue of the special graphs."""
    if kind == "path":
        return 2.0 * (1.0 + math.cos(math.pi / n))
    if kind == "cycle":
        return 2.0 * (1.0 - math.cos(2.0 * math.pi * (n // 2) / n))
    if kind in ("star", "complete"):
        return float(n)
    if kind == "wheel":
        rim = max(1.0 + 2.0 * (1.0 - math.cos(2.0 * math.pi * j / (n - 1))) for j in range(1, n - 1))
        return max(float(n), rim)
    raise ValueError(f"no closed form for lambda_max of {kind!r}")


def lambda_max_bound(c: Complex2) -> float:
    """Gerschgorin bound ``2 * max degree`` on the graph Laplacian."""
    deg = c.degrees()
    return 2.0 * float(deg.max()) if len(deg) else 0.0


def cg_iteration_bound(kappa: float, target_relerr: float) -> int:
    """Smallest ``k`` with ``2 ((sqrt(kappa) - 1) / (sqrt(kappa) + 1))**k <= target``."""
    if kappa < 1.0 - 1e-9:
        raise ValueError("kappa must be >= 1")
    kappa = max(kappa, 1.0)
    if not 0.0 < target_relerr < 1.0:
        raise ValueError("target_relerr must lie in (0, 1)")
    sq = math.sqrt(kappa)
    q = (sq - 1.0) / (sq + 1.0)
    if q == 0.0:
        return 1
    k = max(1, math.ceil(math.log(target_relerr / 2.0) / math.log(q)))
    # guard the ceil against rounding on either side
    while k > 1 and 2.0 * q ** (k - 1) <= target_relerr:
        k -= 1
    while 2.0 * q ** k > target_relerr:
        k += 1
    return k
