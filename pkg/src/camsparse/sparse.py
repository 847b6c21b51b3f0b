"""Sparse data structures and brute-force reference computations.

CSR is the working format of the simulator; COO is the interchange format
produced by the Matrix Market reader.  The ``oracle_*`` functions define
ground truth for the accelerator model by straightforward dense arithmetic
with a fixed summation order (ascending column index), so every simulated
result can be checked against them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError


def _as_i64(seq) -> np.ndarray:
    return np.asarray(seq, dtype=np.int64)


def _as_f64(seq) -> np.ndarray:
    return np.asarray(seq, dtype=np.float64)


@dataclass(eq=False)
class CooMatrix:
    """Coordinate-form sparse matrix with 0-based, duplicate-free entries."""

    n_rows: int
    n_cols: int
    rows: np.ndarray = field(default_factory=lambda: _as_i64([]))
    cols: np.ndarray = field(default_factory=lambda: _as_i64([]))
    values: np.ndarray = field(default_factory=lambda: _as_f64([]))

    def __post_init__(self):
        self.rows = _as_i64(self.rows)
        self.cols = _as_i64(self.cols)
        self.values = _as_f64(self.values)

    @classmethod
    def from_entries(cls, n_rows, n_cols, entries) -> "CooMatrix":
        """Build from an iterable of (row, col, value) triples."""
        entries = list(entries)
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        vals = [e[2] for e in entries]
        return cls(n_rows, n_cols, _as_i64(rows), _as_i64(cols), _as_f64(vals))

    @property
    def nnz(self) -> int:
        return len(self.values)

    def entries(self) -> list[tuple[int, int, float]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()))

    def validate(self) -> None:
        if self.n_rows < 0 or self.n_cols < 0:
            raise ValidationError("matrix dimensions must be non-negative")
        if not (len(self.rows) == len(self.cols) == len(self.values)):
            raise ValidationError("COO component arrays differ in length")
        if self.nnz:
            if self.rows.min() < 0 or self.cols.min() < 0:
                raise ValidationError("negative coordinate")
            if self.rows.max() >= self.n_rows:
                raise ValidationError("row coordinate out of range")
            if self.cols.max() >= self.n_cols:
                raise ValidationError("column coordinate out of range")
            flat = self.rows * max(self.n_cols, 1) + self.cols
            if len(np.unique(flat)) != self.nnz:
                raise ValidationError("duplicate (row, col) coordinate")

    def __eq__(self, other):
        if not isinstance(other, CooMatrix):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and sorted(self.entries()) == sorted(other.entries())
        )


@dataclass(eq=False)
class CsrMatrix:
    """Compressed-sparse-row matrix.

    ``row_start`` holds n_rows+1 offsets into ``col_idx``/``values``; within
    each row the column indices are strictly increasing.  Values are stored
    as 64-bit floats regardless of the word length assumed by the hardware
    models (which take their bit width as a parameter).
    """

    n_rows: int
    n_cols: int
    row_start: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.row_start = _as_i64(self.row_start)
        self.col_idx = _as_i64(self.col_idx)
        self.values = _as_f64(self.values)

    @classmethod
    def empty(cls, n_rows, n_cols) -> "CsrMatrix":
        return cls(n_rows, n_cols, np.zeros(n_rows + 1, np.int64), _as_i64([]), _as_f64([]))

    @classmethod
    def from_dense(cls, arr) -> "CsrMatrix":
        """Sparsify a dense array, dropping exact zeros."""
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise ValidationError("dense input must be 2-D")
        rows, cols = np.nonzero(arr)
        coo = CooMatrix(arr.shape[0], arr.shape[1], rows, cols, arr[rows, cols])
        return coo_to_csr(coo)

    @property
    def nnz(self) -> int:
        return len(self.values)

    def row_nnz(self, j: int) -> int:
        return int(self.row_start[j + 1] - self.row_start[j])

    def row_nnz_counts(self) -> np.ndarray:
        return np.diff(self.row_start)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        for j in range(self.n_rows):
            s, e = self.row_start[j], self.row_start[j + 1]
            out[j, self.col_idx[s:e]] = self.values[s:e]
        return out

    def validate(self) -> None:
        if self.n_rows < 0 or self.n_cols < 0:
            raise ValidationError("matrix dimensions must be non-negative")
        if len(self.row_start) != self.n_rows + 1:
            raise ValidationError("row_start must have n_rows + 1 entries")
        if self.row_start[0] != 0:
            raise ValidationError("row_start[0] must be 0")
        if np.any(np.diff(self.row_start) < 0):
            raise ValidationError("row_start must be non-decreasing")
        if self.row_start[-1] != len(self.col_idx) or len(self.col_idx) != len(self.values):
            raise ValidationError("row_start[-1] must equal len(col_idx) == len(values)")
        if self.nnz:
            if self.col_idx.min() < 0 or self.col_idx.max() >= self.n_cols:
                raise ValidationError("column index out of range")
        for j in range(self.n_rows):
            s, e = self.row_start[j], self.row_start[j + 1]
            if e - s > 1 and np.any(np.diff(self.col_idx[s:e]) <= 0):
                raise ValidationError(f"row {j}: column indices not strictly increasing")

    def __eq__(self, other):
        if not isinstance(other, CsrMatrix):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and np.array_equal(self.row_start, other.row_start)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )


@dataclass(eq=False)
class SparseVector:
    """Sorted (index, value) pairs with a logical length.

    No stored value is exactly zero; indices are strictly increasing.
    """

    length: int
    indices: np.ndarray = field(default_factory=lambda: _as_i64([]))
    values: np.ndarray = field(default_factory=lambda: _as_f64([]))

    def __post_init__(self):
        self.indices = _as_i64(self.indices)
        self.values = _as_f64(self.values)

    @classmethod
    def from_pairs(cls, length, pairs) -> "SparseVector":
        pairs = sorted((int(i), float(v)) for i, v in pairs)
        vec = cls(length, _as_i64([p[0] for p in pairs]), _as_f64([p[1] for p in pairs]))
        vec.validate()
        return vec

    @property
    def nnz(self) -> int:
        return len(self.values)

    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length)
        out[self.indices] = self.values
        return out

    def validate(self) -> None:
        if self.length < 0:
            raise ValidationError("vector length must be non-negative")
        if len(self.indices) != len(self.values):
            raise ValidationError("index/value arrays differ in length")
        if self.nnz:
            if self.indices.min() < 0 or self.indices.max() >= self.length:
                raise ValidationError("vector index out of range")
            if np.any(np.diff(self.indices) <= 0):
                raise ValidationError("vector indices not strictly increasing")
            if np.any(self.values == 0.0):
                raise ValidationError("stored vector value is exactly zero")

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.length == other.length
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )


def coo_to_csr(m: CooMatrix) -> CsrMatrix:
    """Convert COO to CSR, sorting entries row-major and rejecting duplicates."""
    m.validate()
    order = np.lexsort((m.cols, m.rows))
    rows = m.rows[order]
    cols = m.cols[order]
    vals = m.values[order]
    row_start = np.zeros(m.n_rows + 1, dtype=np.int64)
    np.add.at(row_start, rows + 1, 1)
    row_start = np.cumsum(row_start)
    out = CsrMatrix(m.n_rows, m.n_cols, row_start, cols, vals)
    out.validate()
    return out


def csr_to_coo(m: CsrMatrix) -> CooMatrix:
    """Inverse of coo_to_csr; entries come out in row-major order."""
    rows = np.repeat(np.arange(m.n_rows, dtype=np.int64), m.row_nnz_counts())
    return CooMatrix(m.n_rows, m.n_cols, rows, m.col_idx.copy(), m.values.copy())


def transpose_csr(m: CsrMatrix) -> CsrMatrix:
    coo = csr_to_coo(m)
    return coo_to_csr(CooMatrix(m.n_cols, m.n_rows, coo.cols, coo.rows, coo.values))


def extract_row(m: CsrMatrix, j: int) -> SparseVector:
    """Row j of the matrix as a sparse vector of length n_cols."""
    if not 0 <= j < m.n_rows:
        raise ValidationError(f"row index {j} out of range for {m.n_rows} rows")
    s, e = m.row_start[j], m.row_start[j + 1]
    return SparseVector(m.n_cols, m.col_idx[s:e].copy(), m.values[s:e].copy())


def oracle_spmspv(A: CsrMatrix, B: SparseVector) -> SparseVector:
    """Brute-force sparse matrix x sparse vector product.

    B is scattered to a dense array and each row of A is dotted against it
    with strictly ascending column order, one add at a time.  Exact zeros in
    the result are not stored, so floating-point cancellation removes
    entries.
    """
    if A.n_cols != B.length:
        raise DimensionError(f"A has {A.n_cols} columns but B has length {B.length}")
    dense = [0.0] * B.length
    for i, v in zip(B.indices.tolist(), B.values.tolist()):
        dense[i] = v
    row_start = A.row_start.tolist()
    col_idx = A.col_idx.tolist()
    values = A.values.tolist()
    out_idx: list[int] = []
    out_val: list[float] = []
    for j in range(A.n_rows):
        total = 0.0
        for p in range(row_start[j], row_start[j + 1]):
            total += values[p] * dense[col_idx[p]]
        if total != 0.0:
            out_idx.append(j)
            out_val.append(total)
    return SparseVector(A.n_rows, _as_i64(out_idx), _as_f64(out_val))


def oracle_spmspm(A: CsrMatrix, B: CsrMatrix) -> CsrMatrix:
    """Brute-force sparse matrix x sparse matrix product via a dense
    triple loop (innermost index ascending), re-sparsified afterwards."""
    if A.n_cols != B.n_rows:
        raise DimensionError(f"A has {A.n_cols} columns but B has {B.n_rows} rows")
    a = A.to_dense()
    b = B.to_dense()
    out = np.zeros((A.n_rows, B.n_cols))
    for i in range(A.n_rows):
        for j in range(B.n_cols):
            total = 0.0
            for t in range(A.n_cols):
                total += a[i, t] * b[t, j]
            out[i, j] = total
    return CsrMatrix.from_dense(out)


def gen_random_csr(
    n_rows: int,
    n_cols: int,
    density: float,
    seed: int,
    integer_values: bool = False,
) -> CsrMatrix:
    """Deterministic random CSR matrix for desk-scale experiments.

    Each cell is nonzero independently with probability ``density``
    (expected nnz = density * n_rows * n_cols).  Values are uniform
    magnitudes in [0.1, 1.0) with a random sign, or, with
    ``integer_values``, integers in {-9..-1, 1..9}; zero is excluded either
    way.  The same seed always yields the same matrix.
    """
    if not 0.0 <= density <= 1.0:
        raise ValidationError(f"density {density} outside [0, 1]")
    if n_rows < 0 or n_cols < 0:
        raise ValidationError("matrix dimensions must be non-negative")
    rng = np.random.default_rng(seed)
    mask = rng.random((n_rows, n_cols)) < density
    rows, cols = np.nonzero(mask)
    n = len(rows)
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    if integer_values:
        vals = sign * rng.integers(1, 10, size=n).astype(np.float64)
    else:
        vals = sign * rng.uniform(0.1, 1.0, size=n)
    return coo_to_csr(CooMatrix(n_rows, n_cols, rows, cols, vals))
