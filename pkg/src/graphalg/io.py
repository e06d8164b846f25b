"""Graph ingestion, preprocessing, weights, and synthetic generation.

Benchmark inputs go through the same pipeline: read (or generate) an
edge list, drop self-loops, mirror edges to make the graph undirected,
deduplicate, and only then build the adjacency matrix. Weighted runs
draw one integer weight per undirected edge, uniform over [1, 64],
identical in both directions.

All randomness comes from SplitMix64, a tiny shift-xor-multiply
generator with a 64-bit state. It is documented in the README so that
independent implementations can reproduce identical edge streams from
the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import builtin_monoid
from .containers import INDEX_DTYPE, SparseMatrix
from .errors import ParseError


@dataclass
class EdgeList:
    """Directed (src, dst) pairs with optional per-edge weights."""

    src: np.ndarray
    dst: np.ndarray
    n: int
    weight: Optional[np.ndarray] = None

    @property
    def nedges(self) -> int:
        return int(self.src.size)

    def copy(self) -> "EdgeList":
        w = None if self.weight is None else self.weight.copy()
        return EdgeList(self.src.copy(), self.dst.copy(), self.n, w)


@dataclass(frozen=True)
class RmatParams:
    """Recursive-quadrant generator parameters.

    ``scale`` fixes the vertex count at 2**scale and ``edge_factor``
    the number of sampled edges per vertex. The quadrant probabilities
    must sum to one; the defaults are the skewed setting that produces
    scale-free graphs.
    """

    scale: int
    edge_factor: int = 16
    a: float = 0.57
    b: float = 0.19
    c: float = 0.19
    d: float = 0.05
    seed: int = 1

    def __post_init__(self):
        total = self.a + self.b + self.c + self.d
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"quadrant probabilities sum to {total}, expected 1")
        if self.scale < 0 or self.edge_factor <= 0:
            raise ValueError("scale must be >= 0 and edge_factor positive")


_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_U64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator: state += golden gamma, then two
    shift-xor-multiply mixing rounds. Language-neutral and fast."""

    def __init__(self, seed: int):
        self.state = seed & _U64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _U64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _U64
        z = ((z ^ (z >> 27)) * _MIX2) & _U64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def next_int(self, low: int, high: int) -> int:
        """Uniform integer in [low, high] (by modulo; documented bias)."""
        return low + self.next_u64() % (high - low + 1)


def _stream_u64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of SplitMix64(seed), vectorized.

    The state after k calls is seed + k*gamma mod 2**64, so the whole
    stream is a closed form; this must stay bit-identical to the
    scalar class above.
    """
    ks = np.arange(1, count + 1, dtype=np.uint64)
    z = (np.uint64(seed & _U64) + ks * np.uint64(_GAMMA)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


# ---------------------------------------------------------------------------
# Matrix Market
# ---------------------------------------------------------------------------

_FIELDS = ("pattern", "integer", "real")
_SYMMETRIES = ("general", "symmetric")


def read_matrix_market(path) -> EdgeList:
    """Parse a coordinate-format Matrix Market file into an edge list.

    Supports pattern/integer/real fields and general/symmetric
    symmetry. Symmetric files are expanded to both directions;
    pattern entries get weight 1. Indices are converted to 0-based.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", line=1)

    banner = lines[0].split()
    if len(banner) != 5 or banner[0] != "%%MatrixMarket" or banner[1] != "matrix":
        raise ParseError(f"bad banner {lines[0]!r}", line=1)
    layout, field, symmetry = banner[2], banner[3].lower(), banner[4].lower()
    if layout != "coordinate":
        raise ParseError(f"unsupported layout {layout!r} (need coordinate)", line=1)
    if field not in _FIELDS:
        raise ParseError(f"unsupported field {field!r}", line=1)
    if symmetry not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {symmetry!r}", line=1)

    lineno = 1
    body = None
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        body = text.split()
        break
    if body is None:
        raise ParseError("missing size line", line=lineno)
    try:
        nrows, ncols, nnz = (int(tok) for tok in body)
    except ValueError:
        raise ParseError(f"bad size line {body!r}", line=lineno) from None

    srcs, dsts, weights = [], [], []
    seen = 0
    for here, raw in enumerate(lines[lineno:], start=lineno + 1):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        toks = text.split()
        want = 2 if field == "pattern" else 3
        if len(toks) < want:
            raise ParseError(f"entry has {len(toks)} fields, expected {want}", line=here)
        try:
            i, j = int(toks[0]), int(toks[1])
            w = 1.0 if field == "pattern" else float(toks[2])
        except ValueError:
            raise ParseError(f"bad entry {text!r}", line=here) from None
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise ParseError(f"entry ({i}, {j}) outside {nrows}x{ncols}", line=here)
        seen += 1
        srcs.append(i - 1)
        dsts.append(j - 1)
        weights.append(w)
        if symmetry == "symmetric" and i != j:
            srcs.append(j - 1)
            dsts.append(i - 1)
            weights.append(w)
    if seen != nnz:
        raise ParseError(f"declared {nnz} entries but found {seen}", line=len(lines))

    n = max(nrows, ncols)
    weight = np.asarray(weights, dtype=np.float64)
    if field == "pattern":
        weight = None
    return EdgeList(
        np.asarray(srcs, dtype=INDEX_DTYPE),
        np.asarray(dsts, dtype=INDEX_DTYPE),
        n,
        weight,
    )


def write_matrix_market(path, edges: EdgeList, comment=None):
    """Write an edge list as a general coordinate file (1-based)."""
    field = "pattern" if edges.weight is None else "real"
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate {field} general\n")
        if comment:
            fh.write(f"%{comment}\n")
        fh.write(f"{edges.n} {edges.n} {edges.nedges}\n")
        if edges.weight is None:
            for s, t in zip(edges.src, edges.dst):
                fh.write(f"{s + 1} {t + 1}\n")
        else:
            for s, t, w in zip(edges.src, edges.dst, edges.weight):
                fh.write(f"{s + 1} {t + 1} {w:g}\n")


# ---------------------------------------------------------------------------
# Preprocessing
# ---------------------------------------------------------------------------

def preprocess(edges: EdgeList, make_undirected=True) -> EdgeList:
    """Self-loop-free, deduplicated, optionally symmetrized edge list.

    Duplicate weighted edges keep the minimum weight. Output is sorted
    by (src, dst); running it twice changes nothing.
    """
    src, dst = edges.src, edges.dst
    w = edges.weight
    keep = src != dst
    src, dst = src[keep], dst[keep]
    if w is not None:
        w = w[keep]

    if make_undirected:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        if w is not None:
            w = np.concatenate([w, w])

    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    if w is not None:
        w = w[order]
    if src.size:
        first = np.ones(src.size, dtype=bool)
        first[1:] = (np.diff(src) != 0) | (np.diff(dst) != 0)
        if w is not None:
            starts = np.flatnonzero(first)
            w = np.minimum.reduceat(w, starts)
        src, dst = src[first], dst[first]
    return EdgeList(src, dst, edges.n, w)


def assign_weights(edges: EdgeList, low=1, high=64, seed=1) -> EdgeList:
    """Give every undirected edge one uniform integer weight in [low, high].

    Both directions of an edge get the same value. The draw order is
    the first appearance of each (min, max) endpoint pair in the list,
    so a fixed seed and edge order reproduce identical weights.
    """
    if low > high:
        raise ValueError(f"low {low} exceeds high {high}")
    lo = np.minimum(edges.src, edges.dst)
    hi = np.maximum(edges.src, edges.dst)
    key = lo * edges.n + hi
    _, first_pos, inverse = np.unique(key, return_index=True, return_inverse=True)

    # np.unique sorts keys; draw in order of first appearance instead
    npairs = first_pos.size
    stream = low + (_stream_u64(seed, npairs) % np.uint64(high - low + 1)).astype(np.int64)
    rank = np.empty(npairs, dtype=np.int64)
    rank[np.argsort(first_pos, kind="stable")] = np.arange(npairs)
    draws = stream[rank].astype(np.float64)
    return EdgeList(edges.src.copy(), edges.dst.copy(), edges.n, draws[inverse])


def generate_rmat(params: RmatParams) -> EdgeList:
    """Sample edge_factor * 2**scale directed edges by recursive
    quadrant descent; follow with ``preprocess``.

    Each edge makes ``scale`` quadrant choices, one bit per level, so
    the stream is reproducible from the seed alone.
    """
    n = 1 << params.scale
    m = params.edge_factor * n
    t_ab = params.a + params.b
    t_abc = t_ab + params.c

    # one draw per edge per level, consumed most-significant bit first
    x = (_stream_u64(params.seed, m * params.scale) >> np.uint64(11)) * (1.0 / (1 << 53))
    x = x.reshape(m, params.scale)
    rbit = x >= t_ab
    cbit = ((x >= params.a) & (x < t_ab)) | (x >= t_abc)
    shifts = np.arange(params.scale - 1, -1, -1, dtype=np.int64)
    rows = (rbit.astype(np.int64) << shifts).sum(axis=1).astype(INDEX_DTYPE)
    cols = (cbit.astype(np.int64) << shifts).sum(axis=1).astype(INDEX_DTYPE)
    return EdgeList(rows, cols, n)


def edges_to_matrix(edges: EdgeList, weighted=False, build_csc=True) -> SparseMatrix:
    """Adjacency matrix of a clean edge list.

    Pattern graphs store integer 1s (duplicates folded with Plus, a
    no-op after preprocessing); weighted graphs store float weights
    with duplicates folded by Minimum.
    """
    n = edges.n
    if weighted:
        if edges.weight is None:
            raise ValueError("edge list carries no weights")
        vals = np.asarray(edges.weight, dtype=np.float64)
        dedup = builtin_monoid("Minimum")
    else:
        vals = np.ones(edges.nedges, dtype=np.int64)
        dedup = builtin_monoid("Plus")
    return SparseMatrix.from_tuples(edges.src, edges.dst, vals, n, n,
                                    dedup=dedup, build_csc=build_csc)
