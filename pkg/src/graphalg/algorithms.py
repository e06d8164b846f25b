"""The five graph algorithms, composed from container and kernel operations.

Each one is a small orchestration loop over masked semiring multiplies
and elementwise folds; traversal direction is left entirely to the
dispatcher, so the same code runs push-style on thin frontiers and
pull-style on fat ones.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import LESS, MINUS, TIMES, builtin_monoid, builtin_semiring
from .containers import INDEX_DTYPE, Descriptor, SparseMatrix, Vector
from .errors import ShapeError
from .kernels import (
    apply,
    assign,
    assign_scatter,
    ewise_add,
    ewise_mult,
    extract_gather,
    mxm_masked,
    mxv,
    reduce,
    reduce_scalar_matrix,
    transpose,
    vxm,
)

_INT_INF = np.iinfo(np.int64).max


def _require_square(A):
    if A.nrows != A.ncols:
        raise ShapeError(f"adjacency matrix must be square, got {A.nrows}x{A.ncols}")


def _require_symmetric(A):
    r, c, v = A.extract_tuples()
    t_r, t_c, t_v = transpose(A).extract_tuples()
    if not (np.array_equal(r, t_r) and np.array_equal(c, t_c) and np.array_equal(v, t_v)):
        raise ValueError("adjacency matrix must be symmetric (undirected graph)")


def bfs(A: SparseMatrix, source: int, desc=None, early_exit=True) -> Vector:
    """Level labels of a breadth-first search: source is 1, unreached 0.

    Per step: stamp the current level onto the visited vector at the
    frontier, traverse with the boolean semiring under the complement
    of visited, count the survivors, stop at zero. ``early_exit`` lets
    pull iterations stop each row at its first hit; results are
    unchanged but read counters drop below the exact row totals.
    """
    _require_square(A)
    if not 0 <= source < A.nrows:
        raise IndexError(f"source {source} out of range")
    desc = desc if desc is not None else Descriptor()
    desc.early_exit = early_exit
    boolean = builtin_semiring("LogicalOrAnd")
    plus = builtin_monoid("Plus")

    n = A.nrows
    frontier = Vector.from_entries([source], [1], n, dtype=np.int64)
    visited = Vector.filled(n, 0, dtype=np.int64)
    depth = 1
    for _ in range(min(desc.max_niter, n + 1)):
        assign(visited, depth, mask=frontier, desc=desc)
        desc.toggle("mask")
        frontier = vxm(boolean, frontier, A, mask=visited, desc=desc)
        desc.toggle("mask")
        if int(reduce(plus, frontier)) == 0:
            break
        depth += 1
    return visited


def sssp(A: SparseMatrix, source: int, desc=None, on_iteration=None) -> Vector:
    """Single-source shortest distances by frontier-sparsified relaxation.

    Min-plus multiply proposes new distances from the vertices that
    improved last round; an elementwise minimum folds them in. Only
    strictly improved vertices are carried forward, which keeps the
    frontier sparse. Stops when the count of finitely-reached vertices
    is stable and no distance changed, or after |V| rounds.
    """
    _require_square(A)
    if not 0 <= source < A.nrows:
        raise IndexError(f"source {source} out of range")
    if A.nnz and A.csr_values.min() <= 0:
        raise ValueError("edge weights must be positive")
    desc = desc if desc is not None else Descriptor()
    min_plus = builtin_semiring("MinPlus")
    minimum = builtin_monoid("Minimum")
    plus = builtin_monoid("Plus")

    n = A.nrows
    dist = Vector.filled(n, np.inf, dtype=np.float64)
    dist.zero = np.float64(np.inf)
    dist.set_element(source, 0.0)
    frontier = Vector.from_entries([source], [0.0], n, dtype=np.float64)
    ceiling = Vector.filled(n, np.finfo(np.float64).max)

    succ_last = -1.0
    for it in range(min(desc.max_niter, n)):
        candidates = vxm(min_plus, frontier, A, desc=desc)
        improved = ewise_mult(LESS, candidates, dist, desc=desc)
        dist = ewise_add(minimum, dist, candidates, desc=desc)
        frontier = apply(lambda x: x, candidates, mask=improved, desc=desc)
        if on_iteration is not None:
            on_iteration(it, dist.dup())
        reached = ewise_mult(builtin_semiring("PlusLess"), dist, ceiling, desc=desc)
        succ = float(reduce(plus, reached))
        if succ == succ_last and frontier.nvals == 0:
            break
        succ_last = succ
    return dist


def _scale_rows(A: SparseMatrix, alpha: float) -> SparseMatrix:
    """Traversal matrix whose entry (i, j) is alpha / outdegree(i)."""
    lens = np.diff(A.row_offsets)
    inv = np.zeros(A.nrows, dtype=np.float64)
    inv[lens > 0] = alpha / lens[lens > 0]
    values = np.repeat(inv, lens)
    return SparseMatrix.from_csr(A.nrows, A.ncols, A.row_offsets.copy(),
                                 A.col_indices.copy(), values)


def pagerank(A: SparseMatrix, alpha=0.85, eps=1e-7, max_iters=10_000, desc=None) -> Vector:
    """Damped rank scores; iterates until the L2 step delta is <= eps.

    The matrix is pre-scaled once so the inner loop is a plain
    plus-times multiply followed by the teleport broadcast. Rows with
    no out-edges leak their mass, so ranks sum to 1 only on graphs
    without dangling vertices.
    """
    _require_square(A)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    desc = desc if desc is not None else Descriptor()
    plus_times = builtin_semiring("PlusMultiplies")
    plus = builtin_monoid("Plus")

    n = A.nrows
    scaled = _scale_rows(A, alpha)
    teleport = (1.0 - alpha) / n
    ranks = Vector.filled(n, 1.0 / n)
    for _ in range(max_iters):
        previous = ranks
        spread = vxm(plus_times, previous, scaled, desc=desc)
        ranks = ewise_add(plus_times, spread, teleport, desc=desc)
        delta = ewise_mult(MINUS, ranks, previous, desc=desc)
        squared = ewise_add(TIMES, delta, delta, desc=desc)
        error = math.sqrt(float(reduce(plus, squared)))
        if error <= eps:
            break
    return ranks


def connected_components(A: SparseMatrix, desc=None, sparsify=True) -> Vector:
    """Component labels by min-label hooking with grandparent shortcuts.

    Every vertex ends up labeled with the smallest vertex id in its
    component. ``sparsify`` blanks the grandparents that did not change
    this round (they fold to the identity and vanish from the next
    frontier); disabling it only costs work, never changes labels.
    """
    _require_square(A)
    _require_symmetric(A)
    desc = desc if desc is not None else Descriptor()
    min_second = builtin_semiring("MinimumSelectSecond")
    min_fold = builtin_monoid("Minimum")
    not_equal = builtin_semiring("MinimumNotEqualTo")
    plus = builtin_monoid("Plus")

    n = A.nrows
    parent = Vector.dense_of(np.arange(n, dtype=np.int64), 0)
    min_neighbor = parent.dup()
    grandparent = parent.dup()
    grandparent_prev = parent.dup()

    for _ in range(desc.max_niter):
        parent_prev = parent.dup()
        hooked = mxv(min_second, A, grandparent, desc=desc)
        min_neighbor = ewise_add(min_fold, min_neighbor, hooked, desc=desc)
        assign_scatter(parent, min_neighbor, parent_prev, desc=desc)
        parent = ewise_add(min_fold, parent, min_neighbor, desc=desc)
        parent = ewise_add(min_fold, parent, parent_prev, desc=desc)
        extract_gather(grandparent, parent, parent, desc=desc)
        changed = ewise_mult(not_equal, grandparent_prev, grandparent, desc=desc)
        if int(reduce(plus, changed)) == 0:
            break
        grandparent_prev = grandparent.dup()
        if sparsify:
            desc.toggle("mask")
            assign(grandparent, _INT_INF, mask=changed, desc=desc)
            desc.toggle("mask")
    return parent


def _degree_sorted_lower_triangle(A: SparseMatrix) -> SparseMatrix:
    """Strictly-lower triangle after relabeling vertices by ascending
    degree (ties by vertex id)."""
    degrees = np.diff(A.row_offsets)
    order = np.argsort(degrees, kind="stable")
    position = np.empty(A.nrows, dtype=INDEX_DTYPE)
    position[order] = np.arange(A.nrows, dtype=INDEX_DTYPE)

    rows, cols, vals = A.extract_tuples()
    p_rows, p_cols = position[rows], position[cols]
    keep = p_rows > p_cols
    return SparseMatrix.from_tuples(p_rows[keep], p_cols[keep], vals[keep],
                                    A.nrows, A.ncols)


def triangle_count(A: SparseMatrix, desc=None) -> int:
    """Triangles of an undirected simple graph, each counted once.

    Takes the strictly-lower triangle L of the degree-sorted graph and
    reduces the masked product L L^T .* L to a scalar.
    """
    _require_square(A)
    _require_symmetric(A)
    rows, cols, _ = A.extract_tuples()
    if np.any(rows == cols):
        raise ValueError("adjacency matrix must have an empty diagonal")
    desc = desc if desc is not None else Descriptor()
    plus_times = builtin_semiring("PlusMultiplies")
    plus = builtin_monoid("Plus")

    lower = _degree_sorted_lower_triangle(A)
    desc.toggle("inp1")
    closed = mxm_masked(plus_times, lower, lower, mask=lower, desc=desc)
    desc.toggle("inp1")
    return int(reduce_scalar_matrix(plus, closed))
