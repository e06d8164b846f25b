"""Plain-Python reference algorithms used for verification.

These deliberately share nothing with the semiring kernels: queue
BFS, binary-heap Dijkstra, a dense power iteration, union-find, and
direct triangle enumeration. The benchmark harness runs them under
``--verify`` and the test suite uses them as oracles.
"""

from __future__ import annotations

import heapq
from collections import deque

import numpy as np

from .containers import SparseMatrix


def _row(A: SparseMatrix, i):
    lo, hi = A.row_offsets[i], A.row_offsets[i + 1]
    return A.col_indices[lo:hi], A.csr_values[lo:hi]


def bfs_levels(A: SparseMatrix, source: int) -> np.ndarray:
    """Level labels from a FIFO traversal; source gets 1, unreached 0."""
    n = A.nrows
    levels = np.zeros(n, dtype=np.int64)
    levels[source] = 1
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in _row(A, u)[0]:
            if levels[v] == 0:
                levels[v] = levels[u] + 1
                queue.append(int(v))
    return levels


def dijkstra(A: SparseMatrix, source: int) -> np.ndarray:
    """Shortest distances over positive weights; unreachable is +inf."""
    n = A.nrows
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        cols, weights = _row(A, u)
        for v, w in zip(cols, weights):
            nd = d + float(w)
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, int(v)))
    return dist


def power_iteration_ranks(A: SparseMatrix, alpha=0.85, iters=100) -> np.ndarray:
    """Damped rank vector after a fixed number of dense power steps.

    Dangling rows simply contribute nothing, matching the main
    implementation's behavior.
    """
    n = A.nrows
    lens = np.diff(A.row_offsets)
    p = np.full(n, 1.0 / n)
    rows = np.repeat(np.arange(n), lens)
    cols = A.col_indices
    inv_deg = np.zeros(n)
    inv_deg[lens > 0] = 1.0 / lens[lens > 0]
    for _ in range(iters):
        contrib = p[rows] * alpha * inv_deg[rows]
        p_next = np.full(n, (1.0 - alpha) / n)
        np.add.at(p_next, cols, contrib)
        p = p_next
    return p


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def component_labels(A: SparseMatrix) -> np.ndarray:
    """Union-find labels; each vertex gets the minimum id of its component."""
    n = A.nrows
    uf = UnionFind(n)
    rows, cols, _ = A.extract_tuples()
    for i, j in zip(rows, cols):
        uf.union(int(i), int(j))
    labels = np.fromiter((uf.find(i) for i in range(n)), dtype=np.int64, count=n)
    # normalize to the smallest member id per component
    mins = {}
    for i, lab in enumerate(labels):
        mins[lab] = min(mins.get(lab, i), i)
    return np.asarray([mins[lab] for lab in labels], dtype=np.int64)


def triangle_count(A: SparseMatrix) -> int:
    """Enumerate triangles directly from dense adjacency rows.

    For every edge (i, j) with i < j, count common neighbors k > j,
    so each triangle is seen exactly once. Intended for small graphs.
    """
    n = A.nrows
    dense = np.zeros((n, n), dtype=bool)
    rows, cols, _ = A.extract_tuples()
    dense[rows, cols] = True
    beyond = np.arange(n)
    total = 0
    for i, j in zip(rows, cols):
        if i < j:
            total += int(np.count_nonzero(dense[i] & dense[j] & (beyond > j)))
    return total


def same_partition(labels_a, labels_b) -> bool:
    """Do two labelings induce the same grouping of vertices?"""
    labels_a = np.asarray(labels_a)
    labels_b = np.asarray(labels_b)
    if labels_a.shape != labels_b.shape:
        return False
    seen = {}
    for x, y in zip(labels_a.tolist(), labels_b.tolist()):
        if x in seen:
            if seen[x] != y:
                return False
        else:
            seen[x] = y
    return len(set(seen.values())) == len(seen)
