"""Krylov solvers for the singular-but-consistent systems of least-squares ranking.

All solvers start from the zero vector. For a symmetric matrix and a
right-hand side in its range, every iterate then stays in the range, which is
what lets them ignore the kernel of graph Laplacians without any pinning.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, asdict
from typing import Callable, Optional

import numpy as np

from .exceptions import ConvergenceError, DimensionError, NumericalBreakdown
from .sparse import SparseMat, matvec, transpose

__all__ = ["SolveOptions", "SolveReport", "cg", "minres", "lsqr", "schur_solve"]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SolveOptions:
    """``max_iter=None`` means ten times the number of unknowns."""

    tol: float = 1e-8
    max_iter: Optional[int] = None
    record_history: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")

    def cap(self, n: int) -> int:
        return self.max_iter if self.max_iter is not None else max(10 * n, 1)


@dataclass
class SolveReport:
    iterations: int
    converged: bool
    final_relres: float
    residual_history: Optional[list] = None
    elapsed_seconds: float = 0.0
    matvecs: int = 0
    solver: str = ""
    tol: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


class _Counter:
    """Matrix-vector product closure that counts applications."""

    def __init__(self, a: SparseMat):
        self.a = a
        self.count = 0

    def __call__(self, x):
        self.count += 1
        return matvec(self.a, x)


def _check_rhs(a: SparseMat, b, square: bool = True) -> np.ndarray:
    if square and a.n_rows != a.n_cols:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (a.n_rows,):
        raise DimensionError(f"right-hand side has shape {b.shape}, expected ({a.n_rows},)")
    return b


def _finite(*xs):
    for x in xs:
        if not np.all(np.isfinite(x)):
            raise NumericalBreakdown("non-finite value encountered in iteration")


def cg(a: SparseMat, b, opts: SolveOptions = SolveOptions(),
       callback: Callable[[np.ndarray], None] | None = None):
    """Conjugate gradients for symmetric positive semidefinite ``a``.

    Stops when the recursively updated residual satisfies
    ``||r|| <= tol * ||b||``. ``callback`` receives each iterate.
    """
    t0 = time.perf_counter()
    b = _check_rhs(a, b)
    op = _Counter(a)
    n = len(b)
    x = np.zeros(n)
    bnorm = np.linalg.norm(b)
    hist = [1.0] if opts.record_history else None
    if bnorm == 0.0:
        return x, SolveReport(0, True, 0.0, hist, time.perf_counter() - t0, 0, "cg", opts.tol)
    r = b.copy()
    p = r.copy()
    rr = r @ r
    relres = 1.0
    converged = False
    k = 0
    for k in range(1, opts.cap(n) + 1):
        ap = op(p)
        pap = p @ ap
        _finite(pap)
        if pap == 0.0:
            raise NumericalBreakdown(f"cg: zero curvature p'Ap at iteration {k}")
        step = rr / pap
        x += step * p
        r -= step * ap
        rr_new = r @ r
        _finite(rr_new)
        relres = math.sqrt(rr_new) / bnorm
        if hist is not None:
            hist.append(relres)
        if callback is not None:
            callback(x)
        if relres <= opts.tol:
            converged = True
            break
        p = r + (rr_new / rr) * p
        rr = rr_new
    true_relres = float(np.linalg.norm(b - matvec(a, x)) / bnorm)
    return x, SolveReport(k, converged, true_relres, hist, time.perf_counter() - t0,
                          op.count, "cg", opts.tol)


def minres(a: SparseMat, b, opts: SolveOptions = SolveOptions(),
           callback: Callable[[np.ndarray], None] | None = None):
    """MINRES (Paige-Saunders) for symmetric, possibly indefinite ``a``.

    The residual norm estimate ``phibar`` is nonincreasing and is what the
    stopping test and the recorded history use.
    """
    t0 = time.perf_counter()
    b = _check_rhs(a, b)
    op = _Counter(a)
    n = len(b)
    x = np.zeros(n)
    beta1 = np.linalg.norm(b)
    hist = [1.0] if opts.record_history else None
    if beta1 == 0.0:
        return x, SolveReport(0, True, 0.0, hist, time.perf_counter() - t0, 0, "minres", opts.tol)

    r1 = b.copy()
    r2 = b.copy()
    y = b.copy()
    beta, oldb = beta1, 0.0
    dbar = epsln = 0.0
    phibar = beta1
    cs, sn = -1.0, 0.0
    w = np.zeros(n)
    w2 = np.zeros(n)
    converged = False
    itn = 0
    for itn in range(1, opts.cap(n) + 1):
        v = y / beta
        y = op(v)
        if itn >= 2:
            y = y - (beta / oldb) * r1
        alfa = v @ y
        y = y - (alfa / beta) * r2
        r1, r2 = r2, y
        oldb, beta = beta, np.linalg.norm(y)
        _finite(alfa, beta)

        oldeps = epsln
        delta = cs * dbar + sn * alfa
        gbar = sn * dbar - cs * alfa
        epsln = sn * beta
        dbar = -cs * beta
        gamma = max(math.hypot(gbar, beta), _EPS)
        cs, sn = gbar / gamma, beta / gamma
        phi = cs * phibar
        phibar = sn * phibar

        w1, w2 = w2, w
        w = (v - oldeps * w1 - delta * w2) / gamma
        x += phi * w
        relres = phibar / beta1
        if hist is not None:
            hist.append(relres)
        if callback is not None:
            callback(x)
        if relres <= opts.tol:
            converged = True
            break
        if beta == 0.0:
            # invariant subspace reached; x is the minimum-residual solution
            converged = relres <= opts.tol
            break
    true_relres = float(np.linalg.norm(b - matvec(a, x)) / beta1)
    return x, SolveReport(itn, converged, true_relres, hist, time.perf_counter() - t0,
                          op.count, "minres", opts.tol)


def lsqr(a: SparseMat, b, opts: SolveOptions = SolveOptions(),
         callback: Callable[[np.ndarray], None] | None = None):
    """LSQR for ``min ||b - A x||`` with rectangular ``a`` (no damping).

    Stops when ``||r|| <= tol ||b||`` or when the estimate of
    ``||A^T r|| / (||A|| ||r||)`` drops to ``tol``.
    """
    t0 = time.perf_counter()
    b = _check_rhs(a, b, square=False)
    at = transpose(a)
    op, opt = _Counter(a), _Counter(at)
    m, n = a.shape
    x = np.zeros(n)
    bnorm = np.linalg.norm(b)
    hist = [1.0] if opts.record_history else None

    def report(itn, converged, relres):
        return SolveReport(itn, converged, relres, hist, time.perf_counter() - t0,
                           op.count + opt.count, "lsqr", opts.tol)

    if bnorm == 0.0:
        return x, report(0, True, 0.0)
    u = b / bnorm
    beta = bnorm
    v = opt(u)
    alfa = np.linalg.norm(v)
    if alfa == 0.0:
        # A^T b = 0: x = 0 already solves the least-squares problem
        return x, report(0, True, 1.0)
    v = v / alfa
    w = v.copy()
    phibar, rhobar = beta, alfa
    anorm = 0.0
    converged = False
    itn = 0
    for itn in range(1, opts.cap(n) + 1):
        u = op(v) - alfa * u
        beta = np.linalg.norm(u)
        _finite(beta)
        if beta > 0.0:
            u = u / beta
        anorm = math.sqrt(anorm ** 2 + alfa ** 2 + beta ** 2)
        v = opt(u) - beta * v
        alfa = np.linalg.norm(v)
        _finite(alfa)
        if alfa > 0.0:
            v = v / alfa

        rho = math.hypot(rhobar, beta)
        c, s = rhobar / rho, beta / rho
        theta = s * alfa
        rhobar = -c * alfa
        phi = c * phibar
        phibar = s * phibar
        x += (phi / rho) * w
        w = v - (theta / rho) * w

        rnorm = phibar
        arnorm = phibar * alfa * abs(c)
        test1 = rnorm / bnorm
        test2 = arnorm / (anorm * rnorm) if rnorm > 0 else 0.0
        if hist is not None:
            hist.append(test1)
        if callback is not None:
            callback(x)
        if test1 <= opts.tol or test2 <= opts.tol:
            converged = True
            break
    true_relres = float(np.linalg.norm(b - matvec(a, x)) / bnorm)
    return x, report(itn, converged, true_relres)


_INNER = {"cg": cg, "minres": minres}


def schur_solve(a: SparseMat, b, k: int, inner: str = "cg", opts: SolveOptions = SolveOptions(),
                inner_iters: int = 10):
    """Partitioned iteration with a Schur-complement correction.

    ``a`` is split after row/column ``k``: ``A11`` is the leading ``k x k``
    block. Its inverse is approximated by ``inner_iters`` steps of the
    ``inner`` Krylov method. Each sweep solves the small dense block

        (A22 - A21 ~A11^-1 A12) e2 = r2 - A21 ~A11^-1 r1

    directly (least squares, so singular blocks are tolerated), then
    ``A11 e1 = r1 - A12 e2`` approximately, and updates ``x += e``.
    ``report.iterations`` counts sweeps; ``report.matvecs`` counts every
    sparse product, inner ones included.
    """
    t0 = time.perf_counter()
    b = _check_rhs(a, b)
    n = len(b)
    if not 0 <= k <= n:
        raise DimensionError(f"split index {k} outside 0..{n}")
    if inner not in _INNER:
        raise ValueError(f"inner solver must be one of {sorted(_INNER)}")
    idx1, idx2 = np.arange(k), np.arange(k, n)
    a11 = a.submatrix(idx1, idx1)
    a12 = a.submatrix(idx1, idx2).to_dense()
    a21 = a.submatrix(idx2, idx1).to_dense()
    a22 = a.submatrix(idx2, idx2).to_dense()
    inner_solve = _INNER[inner]
    inner_opts = SolveOptions(tol=1e-300, max_iter=inner_iters)
    matvecs = 0

    def approx_inv(rhs):
        nonlocal matvecs
        if k == 0 or not np.any(rhs):
            return np.zeros(k)
        y, rep = inner_solve(a11, rhs, inner_opts)
        matvecs += rep.matvecs
        return y

    m = n - k
    s_block = a22.copy()
    if k and m:
        z = np.column_stack([approx_inv(a12[:, j]) for j in range(m)])
        s_block -= a21 @ z

    x = np.zeros(n)
    bnorm = np.linalg.norm(b)
    hist = [1.0] if opts.record_history else None
    if bnorm == 0.0:
        return x, SolveReport(0, True, 0.0, hist, time.perf_counter() - t0, matvecs, "schur", opts.tol)
    r = b.copy()
    relres = 1.0
    converged = False
    it = 0
    for it in range(1, opts.cap(n) + 1):
        r1, r2 = r[:k], r[k:]
        if m:
            rhs2 = r2 - a21 @ approx_inv(r1) if k else r2
            e2 = np.linalg.lstsq(s_block, rhs2, rcond=None)[0]
        else:
            e2 = np.zeros(0)
        e1 = approx_inv(r1 - a12 @ e2) if k else np.zeros(0)
        e = np.concatenate([e1, e2])
        _finite(e)
        x += e
        r = b - matvec(a, x)
        matvecs += 1
        relres = np.linalg.norm(r) / bnorm
        if hist is not None:
            hist.append(relres)
        if relres <= opts.tol:
            converged = True
            break
    return x, SolveReport(it, converged, float(relres), hist, time.perf_counter() - t0,
                          matvecs, "schur", opts.tol)


def require_converged(report: SolveReport, what: str = "solve"):
    if not report.converged:
        raise ConvergenceError(
            f"{what}: {report.solver} stopped after {report.iterations} iterations "
            f"at relative residual {report.final_relres:.3e}", report)
