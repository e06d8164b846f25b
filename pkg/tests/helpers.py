"""Shared fixtures-in-code: reference instances, oracles, random generators."""

import numpy as np

from graphalg import SparseMatrix, Vector, builtin_semiring

# An 8-vertex directed graph with exactly 20 stored entries, wired so the
# textbook traversal-step arithmetic comes out to round numbers:
#   - out-degrees of the level-2 frontier {0, 2, 3} sum to 8
#   - in-degrees of the unvisited set {4, 5, 6, 7} sum to 10
#   - search from vertex 1 discovers levels {1}, {0,2,3}, {4,7}, {5,6}
EIGHT_VERTEX_EDGES = [
    (1, 0), (1, 2), (1, 3),
    (0, 2), (0, 4),
    (2, 1), (2, 4), (2, 7),
    (3, 0), (3, 1), (3, 7),
    (4, 5), (4, 6), (4, 2),
    (7, 5), (7, 6), (7, 1),
    (5, 6),
    (6, 3), (6, 7),
]

TABLE_SEMIRINGS = ["PlusMultiplies", "LogicalOrAnd", "MinPlus", "MaxPlus", "MinMultiplies"]


def eight_vertex_graph() -> SparseMatrix:
    rows, cols = zip(*EIGHT_VERTEX_EDGES)
    return SparseMatrix.from_tuples(rows, cols, np.ones(len(rows), dtype=np.int64), 8, 8)


def path_graph(n=3, dtype=np.int64) -> SparseMatrix:
    rows, cols = [], []
    for i in range(n - 1):
        rows += [i, i + 1]
        cols += [i + 1, i]
    return SparseMatrix.from_tuples(rows, cols, np.ones(len(rows), dtype=dtype), n, n)


def complete_graph(n, dtype=np.int64) -> SparseMatrix:
    rows, cols = zip(*[(i, j) for i in range(n) for j in range(n) if i != j])
    return SparseMatrix.from_tuples(rows, cols, np.ones(len(rows), dtype=dtype), n, n)


def random_matrix(rng, nrows, ncols, density, dtype=np.int64, low=1, high=9,
                  symmetric=False, no_diagonal=False) -> SparseMatrix:
    stored = rng.random((nrows, ncols)) < density
    if no_diagonal:
        np.fill_diagonal(stored, False)
    if symmetric:
        stored = stored | stored.T
        if no_diagonal:
            np.fill_diagonal(stored, False)
    rows, cols = np.nonzero(stored)
    if np.issubdtype(dtype, np.integer):
        vals = rng.integers(low, high + 1, size=rows.size).astype(dtype)
    else:
        vals = (rng.random(rows.size) * (high - low) + low).astype(dtype)
    if symmetric:
        sym = {}
        for k, (i, j) in enumerate(zip(rows, cols)):
            pair = (min(i, j), max(i, j))
            if pair in sym:
                vals[k] = sym[pair]
            else:
                sym[pair] = vals[k]
    return SparseMatrix.from_tuples(rows, cols, vals, nrows, ncols)


def random_vector(rng, size, nvals, dtype=np.int64, low=1, high=9) -> Vector:
    nvals = min(nvals, size)
    idx = np.sort(rng.choice(size, size=nvals, replace=False))
    if np.issubdtype(dtype, np.integer):
        vals = rng.integers(low, high + 1, size=nvals).astype(dtype)
    else:
        vals = (rng.random(nvals) * (high - low) + low).astype(dtype)
    return Vector.from_entries(idx, vals, size)


def random_mask(rng, size, density=0.5, dense=False) -> Vector:
    if dense:
        vals = (rng.random(size) < density).astype(np.int64)
        return Vector.dense_of(vals, 0)
    idx = np.flatnonzero(rng.random(size) < density)
    # include some stored zeros: a stored false still blocks the write
    vals = (rng.random(idx.size) < 0.8).astype(np.int64)
    return Vector.from_entries(idx, vals, size)


def allowed_array(mask, size, complement=False):
    if mask is None:
        base = np.ones(size, dtype=bool)
        return ~base if complement else base
    base = np.zeros(size, dtype=bool)
    if mask.is_sparse:
        base[mask.indices[mask.values != 0]] = True
    else:
        base = mask.values != 0
    return ~base if complement else base


def oracle_mxv(semiring, A, u, mask=None, complement=False, transpose=False):
    """Dense two-loop reference for w = A u (or A^T u) over a semiring.

    Walks every (i, j) pair of the dense matrix; completely independent
    of the sparse kernels. Returns canonical (indices, values).
    """
    dense = np.zeros((A.nrows, A.ncols), dtype=A.dtype)
    stored = np.zeros((A.nrows, A.ncols), dtype=bool)
    rows, cols, vals = A.extract_tuples()
    dense[rows, cols] = vals
    stored[rows, cols] = True
    if transpose:
        dense, stored = dense.T, stored.T
    n_out, n_in = dense.shape

    dtype = np.result_type(A.csr_values, u.values)
    identity = semiring.add.identity_for(dtype)
    ud = np.full(n_in, identity, dtype=dtype)
    if u.is_sparse:
        ud[u.indices] = u.values
    else:
        ud[:] = u.values
    allowed = allowed_array(mask, n_out, complement)

    out_idx, out_vals = [], []
    for i in range(n_out):
        if not allowed[i]:
            continue
        acc = None
        for j in range(n_in):
            if stored[i, j] and ud[j] != identity:
                p = semiring.multiply.fn(dense[i, j], ud[j])
                acc = p if acc is None else semiring.add.op.fn(acc, p)
        if acc is not None and acc != identity:
            out_idx.append(i)
            out_vals.append(acc)
    return np.asarray(out_idx, dtype=np.int64), np.asarray(out_vals, dtype=dtype)


def oracle_masked_matmul(semiring, A, B, mask, transpose_b=False):
    """Dense reference for C = (A B) .* mask. Returns (rows, cols, vals)."""
    def densify(M):
        d = np.zeros((M.nrows, M.ncols), dtype=np.float64)
        s = np.zeros((M.nrows, M.ncols), dtype=bool)
        r, c, v = M.extract_tuples()
        d[r, c] = v
        s[r, c] = True
        return d, s

    da, sa = densify(A)
    db, sb = densify(B)
    if transpose_b:
        db, sb = db.T, sb.T
    dtype = np.result_type(A.csr_values, B.csr_values)
    identity = semiring.add.identity_for(dtype)

    rows, cols, mvals = mask.extract_tuples()
    out = []
    for i, j, mv in zip(rows, cols, mvals):
        if mv == 0:
            continue
        acc = None
        for k in range(da.shape[1]):
            if sa[i, k] and sb[k, j]:
                p = semiring.multiply.fn(dtype.type(da[i, k]), dtype.type(db[k, j]))
                acc = p if acc is None else semiring.add.op.fn(acc, p)
        if acc is not None:
            out.append((i, j, acc))
        elif identity != 0:
            out.append((i, j, identity))
    if not out:
        return (np.empty(0, np.int64),) * 2 + (np.empty(0, dtype),)
    r, c, v = zip(*out)
    return np.asarray(r), np.asarray(c), np.asarray(v, dtype=dtype)


def canonical(v: Vector):
    """(indices, values) of the canonical sparse form of a kernel output."""
    return v.extract_tuples()


def assert_same_vector(got: Vector, idx, vals, float_rtol=1e-10):
    gi, gv = canonical(got)
    assert np.array_equal(gi, idx), f"indices differ: {gi} vs {idx}"
    if gv.dtype.kind == "f":
        assert np.allclose(gv, vals, rtol=float_rtol, atol=0.0), f"{gv} vs {vals}"
    else:
        assert np.array_equal(gv, vals), f"{gv} vs {vals}"


def semiring_dtype(name):
    # boolean and id-based arithmetic runs on ints, the rest on both
    if name in ("LogicalOrAnd", "MinimumSelectSecond", "MinimumNotEqualTo"):
        return [np.int64]
    return [np.int64, np.float64]


def make_instance(rng, name, n=16, density=0.3, dtype=np.int64):
    semiring = builtin_semiring(name)
    if name == "LogicalOrAnd":
        A = random_matrix(rng, n, n, density, dtype=dtype, low=0, high=1)
        u = random_vector(rng, n, rng.integers(0, n + 1), dtype=dtype, low=1, high=1)
    else:
        A = random_matrix(rng, n, n, density, dtype=dtype, low=1, high=9)
        u = random_vector(rng, n, rng.integers(0, n + 1), dtype=dtype, low=1, high=9)
    return semiring, A, u
