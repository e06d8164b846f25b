"""Matrix and vector containers, the descriptor, and work counters.

Matrices keep both row-oriented (CSR) and column-oriented (CSC)
layouts by default so kernels can walk either rows or columns without
materializing a transpose; the column layout can be skipped to save
memory. Vectors switch between a sorted sparse form (indices + values)
and a flat dense form; which one an operation wants is the backend's
business, not the caller's.

A dense vector has every position "present" as far as structural
operations are concerned. Its ``zero`` attribute only matters for
counting (``nvals``) and for conversion to sparse form, where entries
equal to ``zero`` are dropped. Operations that produce vectors set
``zero`` to the additive identity of the semiring they ran under, so
for min-plus arithmetic a distance vector full of +inf counts as empty.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import Monoid, builtin_monoid
from .errors import FormatError, ShapeError

INDEX_DTYPE = np.int64


class Direction(enum.Enum):
    AUTO = "auto"
    FORCE_PUSH = "force-push"
    FORCE_PULL = "force-pull"


class MaskMode(enum.Enum):
    NORMAL = "normal"
    COMPLEMENT = "complement"


class Partition(enum.Enum):
    # how pull kernels split rows across workers
    NONZERO_SPLIT = "nonzero"
    ROW_SPLIT = "row"


@dataclass
class Counters:
    """Tallies of the work a kernel actually did.

    ``matrix_entries_read`` counts stored matrix entries touched,
    ``semiring_multiplies`` counts multiply-operator applications, and
    ``semiring_adds`` counts add-operator applications. They accumulate
    until ``reset``.
    """

    matrix_entries_read: int = 0
    semiring_multiplies: int = 0
    semiring_adds: int = 0

    def reset(self):
        self.matrix_entries_read = 0
        self.semiring_multiplies = 0
        self.semiring_adds = 0

    def merge(self, other: "Counters"):
        self.matrix_entries_read += other.matrix_entries_read
        self.semiring_multiplies += other.semiring_multiplies
        self.semiring_adds += other.semiring_adds


@dataclass
class Descriptor:
    """Per-call modifiers plus instrumentation state.

    ``switch_ratio`` is the push/pull threshold as a fraction of the
    total edge count (default 1/10). ``direction_log`` records one
    entry per matrix-vector dispatch, which is what the benchmark
    harness prints as the direction trace.
    """

    mask_mode: MaskMode = MaskMode.NORMAL
    transpose_inp0: bool = False
    transpose_inp1: bool = False
    direction: Direction = Direction.AUTO
    switch_ratio: float = 0.1
    max_niter: int = 10_000
    num_workers: int = 1
    partition: Partition = Partition.NONZERO_SPLIT
    early_exit: bool = False
    counters: Counters = field(default_factory=Counters)
    direction_log: list = field(default_factory=list)

    _TOGGLES = {
        "mask": "mask_mode",
        "inp0": "transpose_inp0",
        "inp1": "transpose_inp1",
    }

    def toggle(self, which: str):
        """Flip a binary setting: "mask", "inp0" or "inp1"."""
        if which == "mask":
            self.mask_mode = (
                MaskMode.COMPLEMENT if self.mask_mode is MaskMode.NORMAL else MaskMode.NORMAL
            )
        elif which in ("inp0", "inp1"):
            attr = self._TOGGLES[which]
            setattr(self, attr, not getattr(self, attr))
        else:
            raise KeyError(f"unknown descriptor toggle {which!r}")
        return self


class Vector:
    """A length-n vector in either sparse or dense storage.

    Sparse storage keeps strictly increasing indices with their
    values; dense storage keeps all n values plus the ``zero`` used to
    decide which entries count as stored.
    """

    __slots__ = ("size", "indices", "values", "zero")

    def __init__(self, size, indices, values, zero):
        self.size = int(size)
        self.indices = indices  # None means dense
        self.values = values
        self.zero = zero

    # -- construction -------------------------------------------------

    @classmethod
    def from_entries(cls, indices, values, size, dtype=None) -> "Vector":
        """Build a sparse vector from (index, value) pairs."""
        idx = np.asarray(indices, dtype=INDEX_DTYPE).ravel()
        vals = np.asarray(values, dtype=dtype).ravel()
        if idx.shape != vals.shape:
            raise ShapeError(f"{idx.size} indices vs {vals.size} values")
        if idx.size and (idx.min() < 0 or idx.max() >= size):
            raise IndexError(f"vector index out of range for size {size}")
        order = np.argsort(idx, kind="stable")
        idx, vals = idx[order], vals[order]
        if idx.size > 1 and (np.diff(idx) == 0).any():
            raise ValueError("duplicate index in vector build")
        return cls(size, idx, vals, vals.dtype.type(0))

    @classmethod
    def filled(cls, size, value, dtype=None) -> "Vector":
        """Build a dense vector with every slot equal to ``value``."""
        vals = np.full(size, value, dtype=dtype)
        return cls(size, None, vals, np.zeros(1, dtype=vals.dtype)[0])

    @classmethod
    def empty(cls, size, dtype=np.int64) -> "Vector":
        return cls(size, np.empty(0, INDEX_DTYPE), np.empty(0, dtype), np.dtype(dtype).type(0))

    @classmethod
    def dense_of(cls, values, zero) -> "Vector":
        values = np.asarray(values)
        return cls(values.size, None, values, values.dtype.type(zero))

    # -- basic accessors ----------------------------------------------

    @property
    def is_sparse(self):
        return self.indices is not None

    @property
    def dtype(self):
        return self.values.dtype

    @property
    def nvals(self) -> int:
        """Stored-entry count (sparse) or count of entries != zero (dense)."""
        return self.nvals_for(self.zero)

    def nvals_for(self, zero) -> int:
        if self.is_sparse:
            return int(self.indices.size)
        return int(np.count_nonzero(self.values != zero))

    def set_element(self, i, value):
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} out of range for size {self.size}")
        if self.is_sparse:
            pos = int(np.searchsorted(self.indices, i))
            if pos < self.indices.size and self.indices[pos] == i:
                self.values[pos] = value
            else:
                self.indices = np.insert(self.indices, pos, i)
                self.values = np.insert(self.values, pos, value)
        else:
            self.values[i] = value

    def extract_element(self, i):
        """Value at position i, or None when no entry is stored there."""
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} out of range for size {self.size}")
        if self.is_sparse:
            pos = int(np.searchsorted(self.indices, i))
            if pos < self.indices.size and self.indices[pos] == i:
                return self.values[pos]
            return None
        v = self.values[i]
        return None if v == self.zero else v

    def extract_tuples(self):
        """Stored (indices, values) in ascending index order.

        For dense storage this is the canonical sparse view: entries
        equal to ``zero`` are not reported.
        """
        if self.is_sparse:
            return self.indices.copy(), self.values.copy()
        idx = np.flatnonzero(self.values != self.zero).astype(INDEX_DTYPE)
        return idx, self.values[idx].copy()

    def dup(self) -> "Vector":
        idx = None if self.indices is None else self.indices.copy()
        return Vector(self.size, idx, self.values.copy(), self.zero)

    def clear(self):
        self.indices = np.empty(0, INDEX_DTYPE)
        self.values = np.empty(0, self.values.dtype)

    # -- format conversion --------------------------------------------

    def to_dense(self, zero=None) -> "Vector":
        """Dense copy; absent positions get ``zero`` (default: own zero)."""
        if zero is None:
            zero = self.zero
        if not self.is_sparse:
            out = self.dup()
            out.zero = out.values.dtype.type(zero)
            return out
        vals = np.full(self.size, zero, dtype=self.values.dtype)
        vals[self.indices] = self.values
        return Vector(self.size, None, vals, vals.dtype.type(zero))

    def to_sparse(self, zero=None) -> "Vector":
        """Sparse copy keeping entries different from ``zero``."""
        if zero is None:
            zero = self.zero
        if self.is_sparse:
            keep = self.values != zero
            return Vector(
                self.size, self.indices[keep], self.values[keep], self.values.dtype.type(zero)
            )
        idx = np.flatnonzero(self.values != zero).astype(INDEX_DTYPE)
        return Vector(self.size, idx, self.values[idx].copy(), self.values.dtype.type(zero))

    def __repr__(self):
        kind = "sparse" if self.is_sparse else "dense"
        return f"<Vector {kind} size={self.size} nvals={self.nvals}>"


def vector_build(indices, values, size, dtype=None) -> Vector:
    return Vector.from_entries(indices, values, size, dtype=dtype)


def vector_fill(size, value, dtype=None) -> Vector:
    return Vector.filled(size, value, dtype=dtype)


def vector_convert(v: Vector, target: str, zero) -> Vector:
    """Convert to "dense" or "sparse" storage around an explicit zero."""
    if target == "dense":
        return v.to_dense(zero)
    if target == "sparse":
        return v.to_sparse(zero)
    raise KeyError(f"unknown vector format {target!r}")


class SparseMatrix:
    """An M-by-N sparse matrix in CSR form, optionally mirrored in CSC.

    Column indices are strictly increasing within each row (and row
    indices within each column), with duplicates already combined.
    """

    __slots__ = (
        "nrows",
        "ncols",
        "row_offsets",
        "col_indices",
        "csr_values",
        "col_offsets",
        "row_indices",
        "csc_values",
    )

    def __init__(self, nrows, ncols, row_offsets, col_indices, csr_values,
                 col_offsets=None, row_indices=None, csc_values=None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.row_offsets = row_offsets
        self.col_indices = col_indices
        self.csr_values = csr_values
        self.col_offsets = col_offsets
        self.row_indices = row_indices
        self.csc_values = csc_values

    # -- construction -------------------------------------------------

    @classmethod
    def from_tuples(cls, rows, cols, values, nrows, ncols,
                    dedup: Optional[Monoid] = None, build_csc=True, dtype=None) -> "SparseMatrix":
        """Build from (row, col, value) triples, combining duplicates.

        ``dedup`` is the monoid used to fold duplicate coordinates
        (default Plus).
        """
        if dedup is None:
            dedup = builtin_monoid("Plus")
        rows = np.asarray(rows, dtype=INDEX_DTYPE).ravel()
        cols = np.asarray(cols, dtype=INDEX_DTYPE).ravel()
        vals = np.asarray(values, dtype=dtype).ravel()
        if not (rows.size == cols.size == vals.size):
            raise ShapeError("rows, cols and values must have equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= nrows:
                raise IndexError(f"row index out of bounds for {nrows} rows")
            if cols.min() < 0 or cols.max() >= ncols:
                raise IndexError(f"column index out of bounds for {ncols} columns")
        if vals.dtype == object:
            vals = vals.astype(np.float64)

        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if rows.size:
            first = np.ones(rows.size, dtype=bool)
            first[1:] = (np.diff(rows) != 0) | (np.diff(cols) != 0)
            starts = np.flatnonzero(first)
            vals = dedup.segment_reduce(vals, starts, dtype=vals.dtype)
            rows, cols = rows[starts], cols[starts]

        row_offsets = np.zeros(nrows + 1, dtype=INDEX_DTYPE)
        np.add.at(row_offsets, rows + 1, 1)
        np.cumsum(row_offsets, out=row_offsets)
        mat = cls(nrows, ncols, row_offsets, cols, vals)
        if build_csc:
            mat._build_csc()
        return mat

    @classmethod
    def from_csr(cls, nrows, ncols, row_offsets, col_indices, values, build_csc=True):
        mat = cls(nrows, ncols,
                  np.asarray(row_offsets, INDEX_DTYPE),
                  np.asarray(col_indices, INDEX_DTYPE),
                  np.asarray(values))
        if build_csc:
            mat._build_csc()
        return mat

    def _build_csc(self):
        rows = np.repeat(np.arange(self.nrows, dtype=INDEX_DTYPE), np.diff(self.row_offsets))
        order = np.argsort(self.col_indices, kind="stable")
        self.row_indices = rows[order]
        self.csc_values = self.csr_values[order]
        self.col_offsets = np.zeros(self.ncols + 1, dtype=INDEX_DTYPE)
        np.add.at(self.col_offsets, self.col_indices + 1, 1)
        np.cumsum(self.col_offsets, out=self.col_offsets)

    # -- accessors ----------------------------------------------------

    @property
    def nnz(self) -> int:
        return int(self.col_indices.size)

    @property
    def nvals(self) -> int:
        return self.nnz

    @property
    def has_csc(self) -> bool:
        return self.col_offsets is not None

    @property
    def dtype(self):
        return self.csr_values.dtype

    def row_view(self, transpose=False):
        """(offsets, indices, values, nrows) for walking rows of A or A^T."""
        if not transpose:
            return self.row_offsets, self.col_indices, self.csr_values, self.nrows
        self.require_csc()
        return self.col_offsets, self.row_indices, self.csc_values, self.ncols

    def col_view(self, transpose=False):
        """(offsets, indices, values, ncols) for walking columns of A or A^T."""
        if not transpose:
            self.require_csc()
            return self.col_offsets, self.row_indices, self.csc_values, self.ncols
        return self.row_offsets, self.col_indices, self.csr_values, self.nrows

    def require_csc(self):
        if not self.has_csc:
            raise FormatError(
                "column-oriented storage missing; build the matrix with build_csc=True"
            )

    def extract_tuples(self):
        """(rows, cols, values) in ascending (row, col) order."""
        rows = np.repeat(np.arange(self.nrows, dtype=INDEX_DTYPE), np.diff(self.row_offsets))
        return rows, self.col_indices.copy(), self.csr_values.copy()

    def extract_element(self, i, j):
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError("matrix index out of range")
        lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
        pos = lo + np.searchsorted(self.col_indices[lo:hi], j)
        if pos < hi and self.col_indices[pos] == j:
            return self.csr_values[pos]
        return None

    def set_element(self, i, j, value):
        """Overwrite or insert a single entry. O(nnz); meant for pokes."""
        rows, cols, vals = self.extract_tuples()
        keep = ~((rows == i) & (cols == j))
        rows = np.append(rows[keep], i)
        cols = np.append(cols[keep], j)
        vals = np.append(vals[keep], value)
        rebuilt = SparseMatrix.from_tuples(rows, cols, vals, self.nrows, self.ncols,
                                           build_csc=self.has_csc)
        for name in self.__slots__:
            setattr(self, name, getattr(rebuilt, name))

    def dup(self) -> "SparseMatrix":
        return SparseMatrix(
            self.nrows, self.ncols,
            self.row_offsets.copy(), self.col_indices.copy(), self.csr_values.copy(),
            None if self.col_offsets is None else self.col_offsets.copy(),
            None if self.row_indices is None else self.row_indices.copy(),
            None if self.csc_values is None else self.csc_values.copy(),
        )

    def clear(self):
        dtype = self.csr_values.dtype
        self.row_offsets = np.zeros(self.nrows + 1, INDEX_DTYPE)
        self.col_indices = np.empty(0, INDEX_DTYPE)
        self.csr_values = np.empty(0, dtype)
        if self.has_csc:
            self.col_offsets = np.zeros(self.ncols + 1, INDEX_DTYPE)
            self.row_indices = np.empty(0, INDEX_DTYPE)
            self.csc_values = np.empty(0, dtype)

    def __repr__(self):
        return f"<SparseMatrix {self.nrows}x{self.ncols} nnz={self.nnz}>"


def matrix_build(tuples, nrows, ncols, dedup: Optional[Monoid] = None,
                 build_csc=True, dtype=None) -> SparseMatrix:
    """Build a matrix from an iterable of (row, col, value) triples."""
    tuples = list(tuples)
    if tuples:
        rows, cols, vals = zip(*tuples)
    else:
        rows, cols, vals = [], [], []
    if dtype is None and not tuples:
        dtype = np.int64
    return SparseMatrix.from_tuples(rows, cols, vals, nrows, ncols,
                                    dedup=dedup, build_csc=build_csc, dtype=dtype)
