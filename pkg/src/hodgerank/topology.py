"""Betti numbers of clique complexes and random-density sweeps."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, asdict, fields
from pathlib import Path

import numpy as np

from .complex import Complex2, build_clique_complex, laplacian
from .generators import gen_barabasi_albert, gen_erdos_renyi, rng_from
from .ranking import decompose
from .sparse import transpose, vstack
from .spectral import DENSE_THRESHOLD, kernel_dimension

__all__ = [
    "SweepRow",
    "betti",
    "betti_numbers",
    "harmonic_fraction",
    "kahle_thresholds",
    "density_sweep",
    "write_sweep_csv",
    "read_sweep_csv",
]


def _stacked_betti_1(c: Complex2) -> int:
    """``dim ker [d1; d2^T]`` from singular values."""
    if c.n_edges == 0:
        return 0
    m = vstack(c.boundary_1, transpose(c.boundary_2)).to_dense()
    s = np.linalg.svd(m, compute_uv=False)
    if not len(s) or s[0] == 0.0:
        return c.n_edges
    tol = max(m.shape) * np.finfo(float).eps * s[0]
    return int(c.n_edges - np.sum(s > tol))


def betti(c: Complex2, p: int, method: str = "laplacian",
          dense_threshold: int = DENSE_THRESHOLD) -> int:
    """``dim ker Delta_p``; for ``p == 1`` also ``method="stacked"``."""
    if p not in (0, 1, 2):
        raise ValueError("p must be 0, 1 or 2")
    if c.n_simplices(p) == 0:
        return 0
    if method == "stacked":
        if p != 1:
            raise ValueError("the stacked-matrix method computes only betti_1")
        return _stacked_betti_1(c)
    if method != "laplacian":
        raise ValueError(f"unknown method {method!r}")
    return kernel_dimension(laplacian(c, p), dense_threshold)


def betti_numbers(c: Complex2, **kw) -> tuple[int, int, int]:
    return tuple(betti(c, p, **kw) for p in (0, 1, 2))


def harmonic_fraction(c: Complex2, omega) -> float:
    """``||h|| / ||omega||`` for the harmonic part ``h`` of ``omega``."""
    omega = np.asarray(omega, dtype=float)
    wnorm = np.linalg.norm(omega)
    if wnorm == 0.0:
        raise ValueError("harmonic fraction of a zero cochain is undefined")
    return float(decompose(c, omega).norms["harmonic"] / wnorm)


def kahle_thresholds(n: int) -> dict:
    if n < 2:
        raise ValueError("n must be at least 2")
    return {"lower": 1.0 / n, "mid": n ** -0.5, "upper": n ** (-1.0 / 3.0)}


@dataclass
class SweepRow:
    n: int
    rho: float
    trial: int
    n1: int
    n2: int
    betti1: int
    harmonic_fraction: float


def density_sweep(n: int, rhos, trials: int, seed: int = 0, family: str = "er",
                  ba_m=None) -> list[SweepRow]:
    """One row per (density, trial): ``betti_1`` and the harmonic fraction of
    a uniform random cochain.

    Each trial draws from its own generator seeded by
    ``(seed, density index, trial)``, so rows do not depend on run order.
    For ``family="ba"`` the density is turned into an attachment count
    ``m = round(rho * (n - 1) / 2)`` (at least 1) unless ``ba_m`` is given.
    """
    rows = []
    for ri, rho in enumerate(rhos):
        rho = float(rho)
        if not 0.0 < rho < 1.0:
            raise ValueError(f"density {rho} outside (0, 1)")
        for t in range(trials):
            rng = rng_from(np.random.SeedSequence([seed, ri, t]))
            if family == "er":
                g = gen_erdos_renyi(n, rho, rng)
            elif family == "ba":
                m = ba_m or max(1, min(n - 1, round(rho * (n - 1) / 2)))
                g = gen_barabasi_albert(n, m, rng)
            else:
                raise ValueError(f"unknown family {family!r}")
            c = build_clique_complex(g)
            b1 = betti(c, 1)
            omega = rng.uniform(-1.0, 1.0, c.n_edges)
            frac = harmonic_fraction(c, omega) if c.n_edges else 0.0
            rows.append(SweepRow(n, rho, t, c.n_edges, c.n_triangles, b1, frac))
    return rows


def write_sweep_csv(path, rows, n: int | None = None) -> None:
    """Rows to CSV plus a ``<path>.thresholds.json`` sidecar."""
    names = [f.name for f in fields(SweepRow)]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=names)
        w.writeheader()
        for r in rows:
            w.writerow(asdict(r))
    n = n if n is not None else (rows[0].n if rows else None)
    if n is not None and n >= 2:
        meta = {"n": n, "thresholds": kahle_thresholds(n)}
        Path(str(path) + ".thresholds.json").write_text(json.dumps(meta, indent=2) + "\n")


def read_sweep_csv(path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        return [SweepRow(int(r["n"]), float(r["rho"]), int(r["trial"]), int(r["n1"]),
                         int(r["n2"]), int(r["betti1"]), float(r["harmonic_fraction"]))
                for r in csv.DictReader(fh)]
