"""Row-compressed sparse matrices and the handful of kernels the solvers need.

Everything here works on :class:`SparseMat`, an immutable CSR container whose
construction from triplets sums duplicates and drops exact zeros. Matrices in
this package are mostly small-integer incidence matrices, so keeping the
pattern free of explicit zeros makes the nonzero counts meaningful.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sps

from .exceptions import DimensionError

__all__ = [
    "SparseMat",
    "Permutation",
    "matvec",
    "transpose",
    "gram",
    "add",
    "hstack",
    "vstack",
    "assemble_kkt",
    "degree_order",
    "rcm_order",
    "pattern_stats",
    "write_matrix_market",
    "read_matrix_market",
]


@dataclass(frozen=True, eq=False)
class SparseMat:
    """Immutable compressed-row matrix.

    Use :meth:`from_triplets` (or :meth:`from_dense`) rather than the raw
    constructor; the raw constructor assumes canonical input.
    """

    n_rows: int
    n_cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    vals: np.ndarray
    _rows: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        row_ptr = np.asarray(self.row_ptr, dtype=np.int64)
        col_idx = np.asarray(self.col_idx, dtype=np.int64)
        vals = np.asarray(self.vals, dtype=np.float64)
        if row_ptr.shape != (self.n_rows + 1,) or row_ptr[-1] != len(col_idx):
            raise DimensionError("row_ptr inconsistent with shape or nnz")
        if len(vals) != len(col_idx):
            raise DimensionError("vals and col_idx differ in length")
        for name, arr in (("row_ptr", row_ptr), ("col_idx", col_idx), ("vals", vals)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        rows = np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(row_ptr))
        rows.setflags(write=False)
        object.__setattr__(self, "_rows", rows)

    @classmethod
    def from_triplets(cls, rows, cols, vals, shape) -> "SparseMat":
        n_rows, n_cols = (int(s) for s in shape)
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=np.float64).ravel()
        if not (len(rows) == len(cols) == len(vals)):
            raise DimensionError("triplet arrays differ in length")
        if len(rows) and (rows.min() < 0 or rows.max() >= n_rows
                          or cols.min() < 0 or cols.max() >= n_cols):
            raise DimensionError("triplet index out of range for shape %r" % ((n_rows, n_cols),))
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows):
            # sum runs of equal (row, col) in order of appearance
            start = np.ones(len(rows), dtype=bool)
            start[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            idx = np.flatnonzero(start)
            vals = np.add.reduceat(vals, idx)
            rows, cols = rows[idx], cols[idx]
            keep = vals != 0.0
            rows, cols, vals = rows[keep], cols[keep], vals[keep]
        row_ptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n_rows), out=row_ptr[1:])
        return cls(n_rows, n_cols, row_ptr, cols, vals)

    @classmethod
    def from_dense(cls, a) -> "SparseMat":
        a = np.atleast_2d(np.asarray(a, dtype=np.float64))
        r, c = np.nonzero(a)
        return cls.from_triplets(r, c, a[r, c], a.shape)

    @classmethod
    def from_scipy(cls, a) -> "SparseMat":
        coo = sps.coo_matrix(a)
        return cls.from_triplets(coo.row, coo.col, coo.data, coo.shape)

    @classmethod
    def identity(cls, n: int) -> "SparseMat":
        i = np.arange(n)
        return cls.from_triplets(i, i, np.ones(n), (n, n))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "SparseMat":
        return cls.from_triplets([], [], [], (n_rows, n_cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(self.row_ptr[-1])

    def triplets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._rows.copy(), self.col_idx.copy(), self.vals.copy()

    def row_counts(self) -> np.ndarray:
        return np.diff(self.row_ptr)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        out[self._rows, self.col_idx] = self.vals
        return out

    def to_scipy(self) -> sps.csr_matrix:
        return sps.csr_matrix((self.vals, self.col_idx, self.row_ptr), shape=self.shape)

    def diagonal(self) -> np.ndarray:
        d = np.zeros(min(self.shape))
        on = self._rows == self.col_idx
        d[self._rows[on]] = self.vals[on]
        return d

    def submatrix(self, rows, cols) -> "SparseMat":
        """Extract ``A[rows][:, cols]`` for index arrays (order preserved)."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        rmap = np.full(self.n_rows, -1, dtype=np.int64)
        rmap[rows] = np.arange(len(rows))
        cmap = np.full(self.n_cols, -1, dtype=np.int64)
        cmap[cols] = np.arange(len(cols))
        r, c = rmap[self._rows], cmap[self.col_idx]
        keep = (r >= 0) & (c >= 0)
        return SparseMat.from_triplets(r[keep], c[keep], self.vals[keep], (len(rows), len(cols)))

    def scale(self, s: float) -> "SparseMat":
        return SparseMat.from_triplets(self._rows, self.col_idx, s * self.vals, self.shape)

    def is_symmetric(self) -> bool:
        if self.n_rows != self.n_cols:
            return False
        t = transpose(self)
        return (np.array_equal(self.row_ptr, t.row_ptr)
                and np.array_equal(self.col_idx, t.col_idx)
                and np.array_equal(self.vals, t.vals))

    def __matmul__(self, x):
        if isinstance(x, SparseMat):
            return _spgemm(self, x)
        return matvec(self, x)

    @property
    def T(self) -> "SparseMat":
        return transpose(self)

    def __repr__(self):
        return f"SparseMat(shape={self.shape}, nnz={self.nnz})"


@dataclass(frozen=True)
class Permutation:
    """``forward[old] = new``; a bijection on ``range(n)``."""

    forward: np.ndarray

    def __post_init__(self):
        fwd = np.asarray(self.forward, dtype=np.int64)
        if not np.array_equal(np.sort(fwd), np.arange(len(fwd))):
            raise ValueError("forward is not a permutation of 0..n-1")
        fwd.setflags(write=False)
        object.__setattr__(self, "forward", fwd)

    @classmethod
    def from_order(cls, order) -> "Permutation":
        """Build from ``order[new] = old``."""
        order = np.asarray(order, dtype=np.int64)
        fwd = np.empty_like(order)
        fwd[order] = np.arange(len(order))
        return cls(fwd)

    @property
    def order(self) -> np.ndarray:
        """``order[new] = old``."""
        inv = np.empty_like(self.forward)
        inv[self.forward] = np.arange(len(self.forward))
        return inv

    def inverse(self) -> "Permutation":
        return Permutation(self.order)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.forward, np.arange(len(self.forward))))

    def apply_vector(self, x) -> np.ndarray:
        x = np.asarray(x)
        out = np.empty_like(x)
        out[self.forward] = x
        return out

    def apply_symmetric(self, a: SparseMat) -> SparseMat:
        """Return ``P A P^T``, i.e. entry (i, j) moves to (forward[i], forward[j])."""
        r, c, v = a.triplets()
        return SparseMat.from_triplets(self.forward[r], self.forward[c], v, a.shape)

    def apply_rows(self, a: SparseMat) -> SparseMat:
        r, c, v = a.triplets()
        return SparseMat.from_triplets(self.forward[r], c, v, a.shape)

    def __len__(self):
        return len(self.forward)


def matvec(a: SparseMat, x) -> np.ndarray:
    """``A @ x`` summed row by row in ascending column order."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or len(x) != a.n_cols:
        raise DimensionError(f"matvec: expected vector of length {a.n_cols}, got shape {x.shape}")
    # bincount accumulates sequentially, so each row sums left to right
    return np.bincount(a._rows, weights=a.vals * x[a.col_idx], minlength=a.n_rows)


def transpose(a: SparseMat) -> SparseMat:
    return SparseMat.from_triplets(a.col_idx, a._rows, a.vals, (a.n_cols, a.n_rows))


def _spgemm(a: SparseMat, b: SparseMat) -> SparseMat:
    if a.n_cols != b.n_rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return SparseMat.from_scipy(a.to_scipy() @ b.to_scipy())


def gram(a: SparseMat, mode: str = "left") -> SparseMat:
    """``A A^T`` (mode="left") or ``A^T A`` (mode="right")."""
    if mode == "left":
        return _spgemm(a, transpose(a))
    if mode == "right":
        return _spgemm(transpose(a), a)
    raise ValueError(f"mode must be 'left' or 'right', not {mode!r}")


def add(a: SparseMat, b: SparseMat) -> SparseMat:
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    ra, ca, va = a.triplets()
    rb, cb, vb = b.triplets()
    return SparseMat.from_triplets(np.concatenate([ra, rb]), np.concatenate([ca, cb]),
                                   np.concatenate([va, vb]), a.shape)


def hstack(a: SparseMat, b: SparseMat) -> SparseMat:
    if a.n_rows != b.n_rows:
        raise DimensionError(f"hstack: row counts differ ({a.n_rows} vs {b.n_rows})")
    ra, ca, va = a.triplets()
    rb, cb, vb = b.triplets()
    return SparseMat.from_triplets(np.concatenate([ra, rb]), np.concatenate([ca, cb + a.n_cols]),
                                   np.concatenate([va, vb]), (a.n_rows, a.n_cols + b.n_cols))


def vstack(a: SparseMat, b: SparseMat) -> SparseMat:
    if a.n_cols != b.n_cols:
        raise DimensionError(f"vstack: column counts differ ({a.n_cols} vs {b.n_cols})")
    return transpose(hstack(transpose(a), transpose(b)))


def assemble_kkt(i_dim: int, b: SparseMat, c: SparseMat) -> SparseMat:
    """Block matrix ``[[I, B], [C, 0]]`` with an ``i_dim`` identity block."""
    if b.n_rows != i_dim or c.n_cols != i_dim:
        raise DimensionError(
            f"KKT blocks not conformal: I is {i_dim}x{i_dim}, B is {b.shape}, C is {c.shape}")
    n_rows, n_cols = i_dim + c.n_rows, i_dim + b.n_cols
    eye = np.arange(i_dim)
    rb, cb, vb = b.triplets()
    rc, cc, vc = c.triplets()
    rows = np.concatenate([eye, rb, rc + i_dim])
    cols = np.concatenate([eye, cb + i_dim, cc])
    vals = np.concatenate([np.ones(i_dim), vb, vc])
    return SparseMat.from_triplets(rows, cols, vals, (n_rows, n_cols))


def _require_square(a: SparseMat, what: str):
    if a.n_rows != a.n_cols:
        raise DimensionError(f"{what} needs a square matrix, got {a.shape}")


def degree_order(a: SparseMat) -> Permutation:
    """Sort rows by ascending nonzero count; ties keep their original order."""
    _require_square(a, "degree_order")
    return Permutation.from_order(np.argsort(a.row_counts(), kind="stable"))


def rcm_order(a: SparseMat) -> Permutation:
    """Reverse Cuthill-McKee on the (assumed symmetric) pattern of ``a``.

    Each component is started from its lowest-index minimum-degree vertex and
    neighbours are queued by ascending degree, index breaking ties.
    """
    _require_square(a, "rcm_order")
    n = a.n_rows
    off = a._rows != a.col_idx
    nbr_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(a._rows[off], minlength=n), out=nbr_ptr[1:])
    nbrs = a.col_idx[off]
    deg = np.diff(nbr_ptr)
    visited = np.zeros(n, dtype=bool)
    order = []
    for start in np.lexsort((np.arange(n), deg)):
        if visited[start]:
            continue
        visited[start] = True
        queue = deque([int(start)])
        while queue:
            v = queue.popleft()
            order.append(v)
            nb = nbrs[nbr_ptr[v]:nbr_ptr[v + 1]]
            nb = nb[~visited[nb]]
            nb = nb[np.lexsort((nb, deg[nb]))]
            visited[nb] = True
            queue.extend(int(u) for u in nb)
    return Permutation.from_order(order[::-1])


def pattern_stats(a: SparseMat) -> dict:
    """Nonzero count, bandwidth ``max |i - j|`` and lower profile.

    The profile is ``sum_i (i - min(first column in row i, i))``.
    """
    rows, cols = a._rows, a.col_idx
    bandwidth = int(np.abs(rows - cols).max()) if a.nnz else 0
    first = np.arange(a.n_rows, dtype=np.int64)
    nonempty = np.diff(a.row_ptr) > 0
    first[nonempty] = np.minimum(first[nonempty], cols[a.row_ptr[:-1][nonempty]])
    profile = int((np.arange(a.n_rows) - first).sum())
    return {"nnz": a.nnz, "bandwidth": bandwidth, "profile": profile,
            "n_rows": a.n_rows, "n_cols": a.n_cols}


MM_HEADER = "%%MatrixMarket matrix coordinate real general"


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_matrix_market(path, a: SparseMat, comment: str | None = None) -> None:
    lines = [MM_HEADER]
    if comment:
        lines.extend("% " + line for line in comment.splitlines())
    lines.append(f"{a.n_rows} {a.n_cols} {a.nnz}")
    r, c, v = a.triplets()
    lines.extend(f"{i + 1} {j + 1} {_fmt(x)}" for i, j, x in zip(r, c, v))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_market(path) -> SparseMat:
    with open(path) as fh:
        header = fh.readline().strip()
        tokens = header.lower().split()
        if tokens[:3] != ["%%matrixmarket", "matrix", "coordinate"]:
            raise ValueError(f"{path}: not a coordinate Matrix Market file")
        field_kind = tokens[3] if len(tokens) > 3 else "real"
        symmetry = tokens[4] if len(tokens) > 4 else "general"
        line = fh.readline()
        while line.startswith("%") or not line.strip():
            line = fh.readline()
        n_rows, n_cols, nnz = (int(t) for t in line.split())
        data = np.loadtxt(fh, ndmin=2) if nnz else np.zeros((0, 3))
    if data.shape[0] != nnz:
        raise ValueError(f"{path}: expected {nnz} entries, found {data.shape[0]}")
    rows = data[:, 0].astype(np.int64) - 1
    cols = data[:, 1].astype(np.int64) - 1
    vals = np.ones(nnz) if field_kind == "pattern" else data[:, 2]
    if symmetry == "symmetric":
        off = rows != cols
        rows, cols, vals = (np.concatenate([rows, cols[off]]), np.concatenate([cols, rows[off]]),
                            np.concatenate([vals, vals[off]]))
    return SparseMat.from_triplets(rows, cols, vals, (n_rows, n_cols))


def stats_json(stats: dict, path=None) -> str:
    text = json.dumps(stats, indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
