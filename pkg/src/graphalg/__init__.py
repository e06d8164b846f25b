"""CPU-parallel semiring graph analytics.

Sparse linear algebra over generic semirings with masked operations
and automatic push/pull direction selection, plus breadth-first
search, shortest paths, ranking, connected components, and triangle
counting built on top of it.
"""

from .algebra import (
    BinaryOp,
    Monoid,
    Semiring,
    builtin_monoid,
    builtin_semiring,
)
from .algorithms import (
    bfs,
    connected_components,
    pagerank,
    sssp,
    triangle_count,
)
from .containers import (
    Counters,
    Descriptor,
    Direction,
    MaskMode,
    Partition,
    SparseMatrix,
    Vector,
    matrix_build,
    vector_build,
    vector_convert,
    vector_fill,
)
from .errors import FormatError, GraphAlgError, ParseError, ShapeError
from .io import (
    EdgeList,
    RmatParams,
    SplitMix64,
    assign_weights,
    edges_to_matrix,
    generate_rmat,
    preprocess,
    read_matrix_market,
    write_matrix_market,
)
from .kernels import (
    DirectionDecision,
    apply,
    assign,
    assign_scatter,
    decide_direction,
    ewise_add,
    ewise_mult,
    extract_gather,
    mxm_masked,
    mxv,
    reduce,
    reduce_rows,
    reduce_scalar_matrix,
    spmspv_push,
    spmv_pull,
    transpose,
    vxm,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryOp", "Monoid", "Semiring", "builtin_monoid", "builtin_semiring",
    "SparseMatrix", "Vector", "Descriptor", "Counters", "Direction",
    "MaskMode", "Partition", "matrix_build", "vector_build", "vector_fill",
    "vector_convert",
    "DirectionDecision", "mxv", "vxm", "spmv_pull", "spmspv_push",
    "decide_direction", "mxm_masked", "ewise_add", "ewise_mult", "assign",
    "assign_scatter", "extract_gather", "apply", "reduce", "reduce_rows",
    "reduce_scalar_matrix", "transpose",
    "bfs", "sssp", "pagerank", "connected_components", "triangle_count",
    "EdgeList", "RmatParams", "SplitMix64", "read_matrix_market",
    "write_matrix_market", "preprocess", "assign_weights", "generate_rmat",
    "edges_to_matrix",
    "GraphAlgError", "ShapeError", "FormatError", "ParseError",
    "__version__",
]
