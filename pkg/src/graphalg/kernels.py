"""Matrix-vector multiply family, masked matrix multiply, and elementwise ops.

The matrix-vector product comes in two shapes. The pull kernel walks
rows of the (possibly transposed) matrix against a dense input vector;
its work scales with the stored entries of the rows it visits, so a
mask is applied *first* and disallowed rows are never touched. The
push kernel gathers the columns selected by a sparse input vector and
combines the contributions with a sort and a segmented reduction; the
mask there is applied *after* combination, because skipping matrix
loads is not possible once the columns have been chosen.

``mxv``/``vxm`` dispatch between the two per call: the frontier's
stored-entry count times the average degree estimates how many edges
the multiply would touch, and when that estimate exceeds a fixed
fraction of all edges (default one tenth) the dense pull side wins.
Forcing either direction produces identical results; only the work
accounting differs.

Counters model memory traffic against the stored matrix:
``matrix_entries_read`` grows by exactly the entries of visited rows
in pull mode, and ``semiring_multiplies`` grows by exactly the summed
column lengths of the frontier in push mode.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import (
    Monoid,
    OpLike,
    Semiring,
    add_op_of,
    mult_op_of,
)
from .containers import (
    INDEX_DTYPE,
    Counters,
    Descriptor,
    Direction,
    MaskMode,
    Partition,
    SparseMatrix,
    Vector,
)
from .errors import FormatError, ShapeError


@dataclass(frozen=True)
class DirectionDecision:
    """One push-or-pull choice with the numbers that produced it."""

    chosen: str                     # "push" or "pull"
    frontier_nvals: int
    estimated_frontier_edges: int   # round(average degree * frontier entries)
    total_edges: int
    threshold_edges: float          # total_edges * switch_ratio


def _default_desc(desc):
    return desc if desc is not None else Descriptor()


def _effective_mask(mask, size, mode):
    """Boolean allowed-positions array, or None when unmasked.

    A stored entry whose value is 0 does not allow a write; the
    structural complement flips the whole selection.
    """
    if mask is None:
        return None
    if mask.size != size:
        raise ShapeError(f"mask size {mask.size} does not match output size {size}")
    if mask.is_sparse:
        allowed = np.zeros(size, dtype=bool)
        allowed[mask.indices[mask.values != 0]] = True
    else:
        allowed = mask.values != 0
    if mode is MaskMode.COMPLEMENT:
        allowed = ~allowed
    return allowed


def _ragged_positions(offsets, ids, lens):
    """Data positions of the spans ``offsets[ids] .. offsets[ids]+lens``.

    Returns the concatenated positions plus exclusive segment offsets
    (one per id, length len(ids)+1).
    """
    seg_ofs = np.zeros(ids.size + 1, dtype=INDEX_DTYPE)
    np.cumsum(lens, out=seg_ofs[1:])
    total = int(seg_ofs[-1])
    pos = (
        np.arange(total, dtype=INDEX_DTYPE)
        - np.repeat(seg_ofs[:-1], lens)
        + np.repeat(offsets[ids], lens)
    )
    return pos, seg_ofs


# ---------------------------------------------------------------------------
# Direction choice
# ---------------------------------------------------------------------------

def decide_direction(u: Vector, A: SparseMatrix, desc=None, zero=0) -> DirectionDecision:
    """Choose push or pull for multiplying A (or A^T) by u.

    Pure function of the frontier entry count, nnz(A), the row count,
    the policy and the switch ratio. Ties at the threshold choose push.
    """
    desc = _default_desc(desc)
    total = A.nnz
    nnz_u = u.nvals_for(zero)
    d = total / A.nrows if A.nrows else 0.0
    estimate = int(round(d * nnz_u))
    threshold = total * desc.switch_ratio
    if desc.direction is Direction.FORCE_PUSH:
        chosen = "push"
    elif desc.direction is Direction.FORCE_PULL:
        chosen = "pull"
    else:
        chosen = "pull" if estimate > threshold else "push"
    return DirectionDecision(chosen, nnz_u, estimate, total, threshold)


# ---------------------------------------------------------------------------
# Pull kernel (dense input vector, row walk)
# ---------------------------------------------------------------------------

def _split_row_spans(offsets, nrows, nworkers, mode):
    """Contiguous row spans, one per worker.

    Nonzero split places boundaries by binary search on the row
    offsets so each span holds about the same number of stored
    entries; row split just divides the row range evenly.
    """
    if nworkers <= 1 or nrows <= 1:
        return [(0, nrows)]
    if mode is Partition.ROW_SPLIT:
        bounds = np.linspace(0, nrows, nworkers + 1).astype(np.int64)
    else:
        total = int(offsets[-1])
        targets = (np.arange(nworkers + 1, dtype=np.float64) * total / nworkers)
        bounds = np.searchsorted(offsets, targets, side="left").astype(np.int64)
        bounds[0], bounds[-1] = 0, nrows
    bounds = np.clip(bounds, 0, nrows)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if a < b]


def _pull_span(offsets, indices, values, u_vals, rows, mult, monoid, dtype,
               identity, early_exit):
    """Reduce the given rows; returns (rows_with_output, values, tally)."""
    tally = Counters()
    lens = offsets[rows + 1] - offsets[rows]
    nz = lens > 0
    rows_nz, lens_nz = rows[nz], lens[nz]
    if rows_nz.size == 0:
        return rows_nz, np.empty(0, dtype), tally

    pos, seg_ofs = _ragged_positions(offsets, rows_nz, lens_nz)
    cols = indices[pos]
    avals = values[pos]
    uvals = u_vals[cols]
    include = uvals != identity

    if early_exit:
        # or-reduction may stop a row at its first true contribution;
        # only the read counter changes, never the result
        hit = include & (mult.pairwise(avals, uvals, dtype) != identity)
        pos_in_row = np.arange(pos.size, dtype=INDEX_DTYPE) - np.repeat(seg_ofs[:-1], lens_nz)
        full = np.repeat(lens_nz, lens_nz)
        reads = np.minimum.reduceat(np.where(hit, pos_in_row + 1, full), seg_ofs[:-1])
        tally.matrix_entries_read += int(reads.sum())
    else:
        tally.matrix_entries_read += int(lens.sum())

    seg_id = np.repeat(np.arange(rows_nz.size, dtype=INDEX_DTYPE), lens_nz)
    seg_id = seg_id[include]
    prods = mult.pairwise(avals[include], uvals[include], dtype)
    tally.semiring_multiplies += int(prods.size)

    counts = np.bincount(seg_id, minlength=rows_nz.size)
    nonempty = counts > 0
    starts = np.zeros(rows_nz.size, dtype=INDEX_DTYPE)
    np.cumsum(counts[:-1], out=starts[1:])
    reduced = monoid.segment_reduce(prods, starts[nonempty], dtype)
    tally.semiring_adds += int(prods.size - np.count_nonzero(nonempty))
    return rows_nz[nonempty], reduced, tally


def _spmv_pull(semiring, A, u, mask, desc, transpose):
    offsets, indices, values, out_size = A.row_view(transpose)
    in_size = A.nrows if transpose else A.ncols
    if u.is_sparse:
        raise FormatError("pull kernel requires a dense input vector (dispatcher bug)")
    if u.size != in_size:
        raise ShapeError(f"matrix has {in_size} columns but vector has size {u.size}")

    dtype = np.result_type(values, u.values)
    identity = semiring.add.identity_for(dtype)
    allowed = _effective_mask(mask, out_size, desc.mask_mode)
    early = desc.early_exit and semiring.add.name == "LogicalOr"

    spans = _split_row_spans(offsets, out_size, desc.num_workers, desc.partition)

    def rows_of(span):
        lo, hi = span
        if allowed is None:
            return np.arange(lo, hi, dtype=INDEX_DTYPE)
        return (lo + np.flatnonzero(allowed[lo:hi])).astype(INDEX_DTYPE)

    def work(span):
        return _pull_span(offsets, indices, values, u.values, rows_of(span),
                          semiring.multiply, semiring.add, dtype, identity, early)

    if desc.num_workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=desc.num_workers) as pool:
            results = list(pool.map(work, spans))
    else:
        results = [work(span) for span in spans]

    out = np.full(out_size, identity, dtype=dtype)
    for rows, vals, tally in results:
        out[rows] = vals
        desc.counters.merge(tally)
    return Vector.dense_of(out, identity)


def spmv_pull(semiring: Semiring, A: SparseMatrix, u: Vector, mask=None, desc=None) -> Vector:
    """Row-walking multiply over a dense vector; mask applied first."""
    desc = _default_desc(desc)
    return _spmv_pull(semiring, A, u, mask, desc, desc.transpose_inp0)


# ---------------------------------------------------------------------------
# Push kernel (sparse input vector, column gather)
# ---------------------------------------------------------------------------

def _spmspv_push(semiring, A, u, mask, desc, transpose):
    offsets, indices, values, in_size = A.col_view(transpose)
    out_size = A.ncols if transpose else A.nrows
    if not u.is_sparse:
        raise FormatError("push kernel requires a sparse input vector (dispatcher bug)")
    if u.size != in_size:
        raise ShapeError(f"matrix has {in_size} columns but vector has size {u.size}")

    dtype = np.result_type(values, u.values)
    identity = semiring.add.identity_for(dtype)
    allowed = _effective_mask(mask, out_size, desc.mask_mode)

    cols = u.indices
    lens = offsets[cols + 1] - offsets[cols]
    pos, _ = _ragged_positions(offsets, cols, lens)
    rows = indices[pos]
    avals = values[pos]
    urep = np.repeat(u.values, lens)

    prods = semiring.multiply.pairwise(avals, urep, dtype)
    desc.counters.semiring_multiplies += int(prods.size)

    if rows.size:
        order = np.argsort(rows, kind="stable")
        rows, prods = rows[order], prods[order]
        first = np.ones(rows.size, dtype=bool)
        first[1:] = np.diff(rows) != 0
        starts = np.flatnonzero(first)
        out_idx = rows[starts]
        out_vals = semiring.add.segment_reduce(prods, starts, dtype)
        desc.counters.semiring_adds += int(prods.size - starts.size)
    else:
        out_idx = np.empty(0, INDEX_DTYPE)
        out_vals = np.empty(0, dtype)

    keep = out_vals != identity
    if allowed is not None:
        keep &= allowed[out_idx]
    return Vector(out_size, out_idx[keep], out_vals[keep], identity)


def spmspv_push(semiring: Semiring, A: SparseMatrix, u: Vector, mask=None, desc=None) -> Vector:
    """Column-gathering multiply over a sparse vector; mask applied after."""
    desc = _default_desc(desc)
    return _spmspv_push(semiring, A, u, mask, desc, desc.transpose_inp0)


# ---------------------------------------------------------------------------
# Dispatching multiplies
# ---------------------------------------------------------------------------

def _mv_dispatch(semiring, A, u, mask, desc, transpose):
    out_size = A.ncols if transpose else A.nrows
    in_size = A.nrows if transpose else A.ncols
    if u.size != in_size:
        raise ShapeError(f"matrix expects input of size {in_size}, got {u.size}")
    if mask is not None and mask.size != out_size:
        raise ShapeError(f"mask size {mask.size} does not match output size {out_size}")

    dtype = np.result_type(A.csr_values, u.values)
    identity = semiring.add.identity_for(dtype)
    decision = decide_direction(u, A, desc, zero=identity)
    desc.direction_log.append(decision)

    if decision.chosen == "pull":
        u_run = u if not u.is_sparse else u.to_dense(identity)
        return _spmv_pull(semiring, A, u_run, mask, desc, transpose)
    u_run = u if u.is_sparse else u.to_sparse(identity)
    return _spmspv_push(semiring, A, u_run, mask, desc, transpose)


def mxv(semiring: Semiring, A: SparseMatrix, u: Vector, mask=None, desc=None) -> Vector:
    """w = A u over the semiring, masked, with automatic push/pull."""
    desc = _default_desc(desc)
    return _mv_dispatch(semiring, A, u, mask, desc, desc.transpose_inp0)


def vxm(semiring: Semiring, u: Vector, A: SparseMatrix, mask=None, desc=None) -> Vector:
    """w = u A, i.e. mxv against the transposed matrix."""
    desc = _default_desc(desc)
    return _mv_dispatch(semiring, A, u, mask, desc, not desc.transpose_inp1)


# ---------------------------------------------------------------------------
# Masked matrix-matrix multiply
# ---------------------------------------------------------------------------

def mxm_masked(semiring: Semiring, A: SparseMatrix, B: SparseMatrix,
               mask: SparseMatrix, desc=None) -> SparseMatrix:
    """C = (A B) .* mask, computing only the dot products the mask names.

    For every stored mask entry (i, j) with a nonzero value, the row
    A(i,:) meets the column B(:,j); the shorter index list is binary
    searched against the longer one and the matched products are
    reduced. Stored entries of C never exceed the stored entries of
    the mask.
    """
    desc = _default_desc(desc)
    if desc.mask_mode is MaskMode.COMPLEMENT:
        raise ValueError("complemented matrix masks are not supported")

    b_off, b_idx, b_vals, _ = B.col_view(desc.transpose_inp1)
    b_rows = B.ncols if desc.transpose_inp1 else B.nrows
    b_cols = B.nrows if desc.transpose_inp1 else B.ncols
    if A.ncols != b_rows:
        raise ShapeError(f"inner dimensions differ: {A.ncols} vs {b_rows}")
    if mask.nrows != A.nrows or mask.ncols != b_cols:
        raise ShapeError("mask shape must match the product shape")

    dtype = np.result_type(A.csr_values, b_vals)
    identity = semiring.add.identity_for(dtype)
    additive_zero = dtype.type(0)
    a_off, a_idx, a_vals = A.row_offsets, A.col_indices, A.csr_values
    mult, monoid = semiring.multiply, semiring.add

    out_rows, out_cols, out_vals = [], [], []
    m_rows, m_cols, m_vals = mask.extract_tuples()
    live = m_vals != 0
    for i, j in zip(m_rows[live], m_cols[live]):
        alo, ahi = a_off[i], a_off[i + 1]
        blo, bhi = b_off[j], b_off[j + 1]
        ai, av = a_idx[alo:ahi], a_vals[alo:ahi]
        bi, bv = b_idx[blo:bhi], b_vals[blo:bhi]
        if ai.size == 0 or bi.size == 0:
            left = right = np.empty(0, dtype)
        elif ai.size <= bi.size:
            found = np.searchsorted(bi, ai)
            found_c = np.minimum(found, bi.size - 1)
            hit = (found < bi.size) & (bi[found_c] == ai)
            left, right = av[hit], bv[found_c[hit]]
        else:
            found = np.searchsorted(ai, bi)
            found_c = np.minimum(found, ai.size - 1)
            hit = (found < ai.size) & (ai[found_c] == bi)
            left, right = av[found_c[hit]], bv[hit]
        if left.size:
            prods = mult.pairwise(left, right, dtype)
            desc.counters.semiring_multiplies += int(prods.size)
            desc.counters.semiring_adds += int(prods.size - 1)
            out_rows.append(i)
            out_cols.append(j)
            out_vals.append(monoid.reduce(prods, dtype))
        elif identity != additive_zero:
            out_rows.append(i)
            out_cols.append(j)
            out_vals.append(identity)

    return SparseMatrix.from_tuples(out_rows, out_cols,
                                    np.asarray(out_vals, dtype=dtype),
                                    mask.nrows, mask.ncols, dtype=dtype)


# ---------------------------------------------------------------------------
# Elementwise operations
# ---------------------------------------------------------------------------

def _add_identity(op, dtype):
    if isinstance(op, Semiring):
        return op.add.identity_for(dtype)
    if isinstance(op, Monoid):
        return op.identity_for(dtype)
    raise TypeError(
        f"{op.name!r} has no identity; pass a monoid or semiring for this operation"
    )


def _maybe_identity(op, dtype):
    if isinstance(op, (Semiring, Monoid)):
        return _add_identity(op, dtype)
    return None


def _mask_sparse_result(idx, vals, size, zero, mask, mode):
    allowed = _effective_mask(mask, size, mode)
    if allowed is not None:
        keep = allowed[idx]
        idx, vals = idx[keep], vals[keep]
    return Vector(size, idx, vals, zero)


def ewise_add(op: OpLike, u: Vector, v, mask=None, desc=None) -> Vector:
    """Union elementwise combine: both present -> op, one present -> copy.

    ``v`` may be a scalar, which counts as present at every position.
    A bare BinaryOp works whenever no absent position must be filled;
    paths that need an identity require a monoid or semiring.
    """
    desc = _default_desc(desc)
    add = add_op_of(op)

    if not isinstance(v, Vector):
        # scalar broadcast
        dtype = np.result_type(u.values, v)
        identity = _maybe_identity(op, dtype)
        if u.is_sparse:
            if identity is None:
                _add_identity(op, dtype)  # raises with an explanation
            base = u.to_dense(identity)
        else:
            base = u
        out = add.pairwise(base.values, v, dtype)
        zero = identity if identity is not None else dtype.type(0)
        result = Vector.dense_of(out, zero)
        allowed = _effective_mask(mask, u.size, desc.mask_mode)
        if allowed is not None:
            result.values[~allowed] = result.zero
        return result

    if u.size != v.size:
        raise ShapeError(f"vector sizes differ: {u.size} vs {v.size}")
    dtype = np.result_type(u.values, v.values)

    if u.is_sparse and v.is_sparse:
        idx = np.concatenate([u.indices, v.indices])
        vals = np.concatenate([u.values.astype(dtype), v.values.astype(dtype)])
        if idx.size:
            order = np.argsort(idx, kind="stable")
            idx, vals = idx[order], vals[order]
            first = np.ones(idx.size, dtype=bool)
            first[1:] = np.diff(idx) != 0
            starts = np.flatnonzero(first)
            monoid = Monoid(add, 0.0)
            vals = monoid.segment_reduce(vals, starts, dtype)
            idx = idx[starts]
        return _mask_sparse_result(idx, vals, u.size, dtype.type(0), mask, desc.mask_mode)

    identity = _maybe_identity(op, dtype)
    if identity is None and (u.is_sparse or v.is_sparse or mask is not None):
        _add_identity(op, dtype)  # raises with an explanation
    ud = u.values if not u.is_sparse else u.to_dense(identity).values
    vd = v.values if not v.is_sparse else v.to_dense(identity).values
    out = add.pairwise(ud, vd, dtype)
    zero = identity if identity is not None else dtype.type(0)
    allowed = _effective_mask(mask, u.size, desc.mask_mode)
    if allowed is not None:
        out = np.where(allowed, out, zero)
    return Vector.dense_of(out, zero)


def ewise_mult(op: OpLike, u: Vector, v: Vector, mask=None, desc=None) -> Vector:
    """Intersection elementwise combine; dense operands are present everywhere."""
    desc = _default_desc(desc)
    mult = mult_op_of(op)
    if u.size != v.size:
        raise ShapeError(f"vector sizes differ: {u.size} vs {v.size}")
    dtype = np.result_type(u.values, v.values)

    if u.is_sparse and v.is_sparse:
        common, ui, vi = np.intersect1d(u.indices, v.indices,
                                        assume_unique=True, return_indices=True)
        vals = mult.pairwise(u.values[ui], v.values[vi], dtype)
        return _mask_sparse_result(common.astype(INDEX_DTYPE), vals, u.size,
                                   dtype.type(0), mask, desc.mask_mode)
    if u.is_sparse:
        vals = mult.pairwise(u.values, v.values[u.indices], dtype)
        return _mask_sparse_result(u.indices.copy(), vals, u.size,
                                   dtype.type(0), mask, desc.mask_mode)
    if v.is_sparse:
        vals = mult.pairwise(u.values[v.indices], v.values, dtype)
        return _mask_sparse_result(v.indices.copy(), vals, u.size,
                                   dtype.type(0), mask, desc.mask_mode)

    out = mult.pairwise(u.values, v.values, dtype)
    result = Vector.dense_of(out, dtype.type(0))
    allowed = _effective_mask(mask, u.size, desc.mask_mode)
    if allowed is not None:
        return _mask_sparse_result(
            np.flatnonzero(allowed).astype(INDEX_DTYPE), out[allowed],
            u.size, dtype.type(0), None, MaskMode.NORMAL,
        )
    return result


# ---------------------------------------------------------------------------
# Assign / gather / apply / reduce
# ---------------------------------------------------------------------------

def assign(w: Vector, value, mask=None, desc=None, indices=None) -> Vector:
    """Write a scalar at every mask-allowed position of w, in place."""
    desc = _default_desc(desc)
    allowed = _effective_mask(mask, w.size, desc.mask_mode)
    if allowed is None:
        allowed = np.ones(w.size, dtype=bool)
    if indices is not None:
        sel = np.zeros(w.size, dtype=bool)
        sel[np.asarray(indices, dtype=INDEX_DTYPE)] = True
        allowed = allowed & sel
    if not allowed.any():
        return w
    if w.is_sparse:
        dense = w.to_dense(w.zero)
        w.indices, w.values = None, dense.values
    w.values[allowed] = value
    return w


def assign_scatter(w: Vector, values: Vector, indices: Vector, mask=None, desc=None) -> Vector:
    """w(indices(k)) <- values(k) for stored k; colliding targets keep the minimum."""
    desc = _default_desc(desc)
    if values.size != indices.size:
        raise ShapeError("values and indices must have equal size")

    if indices.is_sparse or values.is_sparse:
        ki = indices.extract_tuples()[0] if indices.is_sparse else None
        kv = values.extract_tuples()[0] if values.is_sparse else None
        if ki is None:
            k = kv
        elif kv is None:
            k = ki
        else:
            k = np.intersect1d(ki, kv, assume_unique=True)
        tgt = (indices.values[np.searchsorted(indices.indices, k)]
               if indices.is_sparse else indices.values[k])
        val = (values.values[np.searchsorted(values.indices, k)]
               if values.is_sparse else values.values[k])
    else:
        tgt = indices.values
        val = values.values

    tgt = np.asarray(tgt, dtype=INDEX_DTYPE)
    if tgt.size and (tgt.min() < 0 or tgt.max() >= w.size):
        raise IndexError("scatter target index out of range")

    allowed = _effective_mask(mask, w.size, desc.mask_mode)
    if allowed is not None:
        keep = allowed[tgt]
        tgt, val = tgt[keep], val[keep]
    if tgt.size == 0:
        return w

    order = np.argsort(tgt, kind="stable")
    tgt, val = tgt[order], val[order]
    first = np.ones(tgt.size, dtype=bool)
    first[1:] = np.diff(tgt) != 0
    starts = np.flatnonzero(first)
    combined = np.minimum.reduceat(val, starts)

    if w.is_sparse:
        dense = w.to_dense(w.zero)
        w.indices, w.values = None, dense.values
    w.values[tgt[starts]] = combined
    return w


def extract_gather(w: Vector, u: Vector, indices: Vector, mask=None, desc=None) -> Vector:
    """w(k) = u(indices(k)) for stored k of ``indices``; replaces w's contents."""
    desc = _default_desc(desc)
    if indices.is_sparse:
        k = indices.indices
        gather = indices.values.astype(INDEX_DTYPE)
    else:
        k = np.arange(indices.size, dtype=INDEX_DTYPE)
        gather = indices.values.astype(INDEX_DTYPE)
    if gather.size and (gather.min() < 0 or gather.max() >= u.size):
        raise IndexError("gather index out of range")

    if u.is_sparse:
        pos = np.searchsorted(u.indices, gather)
        pos_c = np.minimum(pos, max(u.indices.size - 1, 0))
        present = (pos < u.indices.size) & (u.indices[pos_c] == gather) \
            if u.indices.size else np.zeros(gather.size, bool)
        k, vals = k[present], u.values[pos_c[present]]
        sparse_out = True
    else:
        vals = u.values[gather]
        sparse_out = indices.is_sparse

    allowed = _effective_mask(mask, w.size, desc.mask_mode)
    if allowed is not None:
        keep = allowed[k]
        k, vals = k[keep], vals[keep]
        sparse_out = True

    if sparse_out:
        w.indices, w.values = k.astype(INDEX_DTYPE), vals.copy()
    else:
        w.indices, w.values = None, vals.copy()
    return w


def apply(fn, u: Vector, mask=None, desc=None) -> Vector:
    """Map a unary function over stored entries, dropping masked-off ones.

    ``fn`` must accept numpy arrays (plain arithmetic lambdas do).
    """
    desc = _default_desc(desc)
    allowed = _effective_mask(mask, u.size, desc.mask_mode)
    if allowed is None:
        if u.is_sparse:
            return Vector(u.size, u.indices.copy(), np.asarray(fn(u.values)), u.zero)
        return Vector.dense_of(np.asarray(fn(u.values)), u.zero)
    if u.is_sparse:
        keep = allowed[u.indices]
        idx, vals = u.indices[keep], u.values[keep]
    else:
        idx = np.flatnonzero(allowed).astype(INDEX_DTYPE)
        vals = u.values[idx]
    return Vector(u.size, idx, np.asarray(fn(vals)), u.zero)


def reduce(monoid: Monoid, u: Vector):
    """Fold all stored entries of a vector down to one scalar."""
    if u.is_sparse:
        return monoid.reduce(u.values)
    vals = u.values[u.values != u.zero]
    return monoid.reduce(vals, dtype=u.values.dtype)


def reduce_rows(monoid: Monoid, A: SparseMatrix) -> Vector:
    """Per-row reduction of stored values; empty rows give the identity."""
    lens = np.diff(A.row_offsets)
    dtype = A.csr_values.dtype
    identity = monoid.identity_for(dtype)
    out = np.full(A.nrows, identity, dtype=dtype)
    nonempty = lens > 0
    if nonempty.any():
        starts = A.row_offsets[:-1][nonempty]
        out[nonempty] = monoid.segment_reduce(A.csr_values, starts, dtype)
    return Vector.dense_of(out, identity)


def reduce_scalar_matrix(monoid: Monoid, A: SparseMatrix):
    """Fold every stored matrix entry down to one scalar."""
    return monoid.reduce(A.csr_values)


def transpose(A: SparseMatrix) -> SparseMatrix:
    """Reverse every edge; constant time when both layouts are stored."""
    if not A.has_csc:
        A._build_csc()
    return SparseMatrix(
        A.ncols, A.nrows,
        A.col_offsets, A.row_indices, A.csc_values,
        A.row_offsets, A.col_indices, A.csr_values,
    )
