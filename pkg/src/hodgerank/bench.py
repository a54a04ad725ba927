"""Experiment drivers behind the command line: solver benchmarks, CG bound
sweeps and matrix/pattern export."""

from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .complex import (Complex2, Graph, build_clique_complex, laplacian_0, laplacian_1,
                      laplacian_2)
from .generators import (gen_barabasi_albert, gen_erdos_renyi, gen_instance, gen_special,
                         gen_watts_strogatz, rng_from)
from .krylov import SolveOptions, cg
from .ranking import METHODS, center_per_component, decompose
from .sparse import (SparseMat, degree_order, matvec, pattern_stats, rcm_order,
                     write_matrix_market)
from .spectral import (cg_iteration_bound, extreme_eigs, special_lambda_max,
                       special_lambda_min)

__all__ = [
    "BenchRow",
    "make_graph",
    "run_bench",
    "write_bench_csv",
    "read_bench_csv",
    "BoundRow",
    "cg_actual_iterations",
    "run_spectral",
    "write_rows_csv",
    "export_matrices",
]

SPECIAL_KINDS = ("path", "cycle", "star", "wheel", "complete")


def make_graph(family: str, params: dict, seed=None) -> Graph:
    """``family`` is er (n, p), ws (n, k, p_rewire), ba (n, m) or a special kind (n)."""
    n = int(params["n"])
    if family == "er":
        return gen_erdos_renyi(n, float(params["p"]), seed)
    if family == "ws":
        return gen_watts_strogatz(n, int(params["k"]), float(params.get("p_rewire", 0.3)), seed)
    if family == "ba":
        return gen_barabasi_albert(n, int(params["m"]), seed)
    if family == "special":
        return gen_special(params["kind"], n)
    if family in SPECIAL_KINDS:
        return gen_special(family, n)
    raise ValueError(f"unknown graph family {family!r}")


@dataclass
class BenchRow:
    n0: int
    n1: int
    n2: int
    edge_density: float
    triangle_density: float
    method: str
    rel_err_grad: float
    rel_err_curl: float
    err_harmonic: float
    harmonic_is_absolute: bool
    iters_alpha: int
    iters_beta: int
    secs_alpha: float
    secs_beta: float
    trials: int = 1
    error: str = ""


def _densities(c: Complex2) -> tuple[float, float]:
    n0, n1, n2 = c.counts
    pairs, triples = math.comb(n0, 2), math.comb(n0, 3)
    return (n1 / pairs if pairs else 0.0, n2 / triples if triples else 0.0)


def _err(got, want) -> tuple[float, bool]:
    """Relative error, or absolute error when the reference is zero."""
    ref = float(np.linalg.norm(want))
    diff = float(np.linalg.norm(np.asarray(got) - np.asarray(want)))
    return (diff / ref, False) if ref > 0 else (diff, True)


def run_bench(family: str, params: dict, methods=METHODS, trials: int = 5, seed: int = 0,
              tol: float = 1e-8) -> list[BenchRow]:
    """One row per method, averaged over ``trials`` random instances.

    The graph is drawn once from ``seed``; each trial draws a fresh
    instance with known gradient, curl and harmonic parts on it. Errors and
    iteration counts are means over trials, times are medians. A method
    that fails records the exception text in ``error`` and the run goes on.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    graph = make_graph(family, params, rng_from(np.random.SeedSequence([seed, 0])))
    c = build_clique_complex(graph)
    ed, td = _densities(c)
    instances = [gen_instance(c, np.random.SeedSequence([seed, 1, t])) for t in range(trials)]
    opts = SolveOptions(tol=tol)
    rows = []
    for method in methods:
        eg, ec, eh, ia, ib, sa, sb = [], [], [], [], [], [], []
        absolute = False
        error = ""
        for inst in instances:
            try:
                res = decompose(c, inst.omega, method, opts)
            except Exception as exc:  # recorded per row, the run continues
                error = f"{type(exc).__name__}: {exc}"
                break
            eg.append(_err(res.grad_part, inst.true_grad)[0])
            ec.append(_err(res.curl_part, inst.true_curl)[0])
            e, absolute = _err(res.harmonic, inst.true_harmonic)
            eh.append(e)
            ra, rb = res.reports["alpha"], res.reports["beta"]
            ia.append(ra.iterations)
            ib.append(rb.iterations)
            sa.append(ra.elapsed_seconds)
            sb.append(rb.elapsed_seconds)
            if not (ra.converged and rb.converged):
                error = "not converged"
        nan = float("nan")
        rows.append(BenchRow(
            c.n_vertices, c.n_edges, c.n_triangles, ed, td, method,
            float(np.mean(eg)) if eg else nan, float(np.mean(ec)) if ec else nan,
            float(np.mean(eh)) if eh else nan, absolute,
            int(round(np.mean(ia))) if ia else -1, int(round(np.mean(ib))) if ib else -1,
            statistics.median(sa) if sa else nan, statistics.median(sb) if sb else nan,
            trials, error))
    return rows


def write_rows_csv(path, rows) -> None:
    if not rows:
        Path(path).write_text("")
        return
    names = [f.name for f in fields(rows[0])]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=names)
        w.writeheader()
        for r in rows:
            w.writerow(asdict(r))


write_bench_csv = write_rows_csv


def _parse(value: str, typ):
    if typ is bool:
        return value == "True"
    return typ(value)


def read_bench_csv(path) -> list[BenchRow]:
    types = {f.name: f.type for f in fields(BenchRow)}
    conv = {"int": int, "float": float, "str": str, "bool": bool}
    with open(path, newline="") as fh:
        return [BenchRow(**{k: _parse(v, conv[types[k]]) for k, v in r.items()})
                for r in csv.DictReader(fh)]


@dataclass
class BoundRow:
    n: int
    kind: str
    bound_known: float
    bound_exact: int
    actual: int
    kappa_exact: float


def _known_kappa(kind: str, c: Complex2) -> float:
    n = c.n_vertices
    if kind in ("path", "cycle", "star", "complete"):
        return special_lambda_max(kind, n) / special_lambda_min(kind, n)
    if kind == "wheel":
        # hub plus rim: edge connectivity 3; general lower bound on lambda_min
        return special_lambda_max(kind, n) / special_lambda_min("general", n, 3)
    return float("nan")


def cg_actual_iterations(a: SparseMat, x_true, target: float = 1e-8, max_iter: int | None = None) -> int:
    """CG iterations until ``||x_true - x_k||_A <= target ||x_true||_A`` from ``x_0 = 0``."""
    b = matvec(a, x_true)
    e0 = math.sqrt(max(x_true @ b, 0.0))
    if e0 == 0.0:
        return 0
    errs = []

    def track(xk):
        d = x_true - xk
        errs.append(math.sqrt(max(d @ matvec(a, d), 0.0)) / e0)

    cap = max_iter or 10 * a.n_rows
    cg(a, b, SolveOptions(tol=1e-15, max_iter=cap), callback=track)
    for k, e in enumerate(errs, 1):
        if e <= target:
            return k
    return -1


def run_spectral(family: str, sizes, target: float = 1e-8, seed: int = 0,
                 params: dict | None = None) -> list[BoundRow]:
    """Predicted and measured CG iterations on graph Laplacians.

    ``bound_known`` uses closed-form eigenvalues where available (NaN for
    random families), ``bound_exact`` the measured condition number modulo
    the kernel, and ``actual`` the CG iterations on a consistent system
    whose solution is a random centered vector.
    """
    rows = []
    for i, n in enumerate(sizes):
        p = dict(params or {})
        p["n"] = n
        g = make_graph(family, p, rng_from(np.random.SeedSequence([seed, i])))
        c = build_clique_complex(g)
        lap = laplacian_0(c)
        summ = extreme_eigs(lap)
        kappa = summ.kappa
        bound_exact = cg_iteration_bound(kappa, target)
        kk = _known_kappa(family, c)
        bound_known = float(cg_iteration_bound(kk, target)) if np.isfinite(kk) else float("nan")
        rng = rng_from(np.random.SeedSequence([seed, i, 1]))
        x = rng.uniform(-1.0, 1.0, c.n_vertices)
        x = center_per_component(c, x)
        rows.append(BoundRow(n, family, bound_known, bound_exact, cg_actual_iterations(lap, x, target),
                             kappa))
    return rows


def export_matrices(c: Complex2, what: str, outdir, reorder: str = "none") -> dict:
    """Write Matrix Market files and ``patterns.json`` into ``outdir``.

    ``what`` is ``boundaries``, ``laplacians`` or ``patterns`` (statistics
    only). ``reorder`` (none, degree, rcm) is applied symmetrically to the
    square Laplacians; boundary matrices are never reordered.
    """
    if what not in ("boundaries", "laplacians", "patterns"):
        raise ValueError(f"unknown export target {what!r}")
    if reorder not in ("none", "degree", "rcm"):
        raise ValueError(f"unknown reordering {reorder!r}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    mats = {}
    if what in ("boundaries", "patterns"):
        mats["boundary_1"] = c.boundary_1
        mats["boundary_2"] = c.boundary_2
    if what in ("laplacians", "patterns"):
        for name, lap in (("laplacian_0", laplacian_0(c)), ("laplacian_1", laplacian_1(c)),
                          ("laplacian_2", laplacian_2(c))):
            if reorder == "degree":
                lap = degree_order(lap).apply_symmetric(lap)
            elif reorder == "rcm":
                lap = rcm_order(lap).apply_symmetric(lap)
            mats[name] = lap
    stats = {"counts": list(c.counts), "reorder": reorder, "matrices": {}}
    for name, m in mats.items():
        stats["matrices"][name] = pattern_stats(m)
        if what != "patterns":
            write_matrix_market(outdir / f"{name}.mtx", m)
    (outdir / "patterns.json").write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n")
    return stats
