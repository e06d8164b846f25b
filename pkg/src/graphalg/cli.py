"""Benchmark and verification harness.

Loads a Matrix Market graph or generates a synthetic one, runs one of
the five algorithms a configurable number of times, and reports mean
runtime, edge throughput (MTEPS = stored edges / mean runtime /
1e6), the per-iteration direction trace, and a digest of the result.
Graph loading and preprocessing are timed separately and never count
toward the reported runtime. ``--verify`` cross-checks the result
against an independent reference implementation and fails the run on
any mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import algorithms, reference
from .containers import Descriptor, Direction, Vector
from .io import (
    EdgeList,
    RmatParams,
    assign_weights,
    edges_to_matrix,
    generate_rmat,
    preprocess,
    read_matrix_market,
)

ALGORITHMS = ("bfs", "sssp", "pr", "cc", "tc")


@dataclass
class RunReport:
    """Everything one benchmark invocation measured."""

    algorithm: str
    dataset: str
    runs: int
    mean_runtime_ms: float
    mteps: float
    result_digest: str
    trace: list = field(default_factory=list)
    load_time_ms: float = 0.0
    nnz: int = 0
    nrows: int = 0
    verified: bool | None = None

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "dataset": self.dataset,
            "runs": self.runs,
            "mean_runtime_ms": self.mean_runtime_ms,
            "mteps": self.mteps,
            "result_digest": self.result_digest,
            "load_time_ms": self.load_time_ms,
            "nnz": self.nnz,
            "nrows": self.nrows,
            "verified": self.verified,
            "trace": self.trace,
        }


def build_parser():
    parser = argparse.ArgumentParser(
        prog="graphalg",
        description="Run a semiring graph algorithm and report runtime, "
                    "MTEPS, and the push/pull direction trace.",
    )
    parser.add_argument("algorithm", choices=ALGORITHMS)
    src = parser.add_argument_group("graph source")
    src.add_argument("--graph", metavar="PATH", help="Matrix Market coordinate file")
    src.add_argument("--rmat-scale", type=int, metavar="N",
                     help="generate 2^N vertices of synthetic scale-free graph")
    src.add_argument("--edge-factor", type=int, default=16)
    src.add_argument("--seed", type=int, default=1)

    parser.add_argument("--source", type=int, default=0, help="start vertex for bfs/sssp")
    parser.add_argument("--alpha", type=float, default=0.85)
    parser.add_argument("--eps", type=float, default=1e-7)
    parser.add_argument("--max-iters", type=int, default=10_000)
    parser.add_argument("--direction", choices=("auto", "force-push", "force-pull"),
                        default="auto")
    parser.add_argument("--switch-ratio", type=float, default=0.1)
    parser.add_argument("--runs", type=int, default=10)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker count for pull kernels (default: hardware)")
    parser.add_argument("--verify", action="store_true",
                        help="cross-check the result against a reference implementation")
    parser.add_argument("--json", action="store_true", dest="as_json",
                        help="emit the report as a JSON document")
    parser.add_argument("--trace", action="store_true",
                        help="print per-iteration direction decisions")
    return parser


def _load_graph(args):
    """(matrix, dataset name); preprocessed per the benchmark rules."""
    weighted = args.algorithm == "sssp"
    if args.graph:
        edges = read_matrix_market(args.graph)
        dataset = os.path.basename(args.graph)
    elif args.rmat_scale is not None:
        edges = generate_rmat(RmatParams(scale=args.rmat_scale,
                                         edge_factor=args.edge_factor,
                                         seed=args.seed))
        dataset = f"rmat-s{args.rmat_scale}-e{args.edge_factor}"
    else:
        raise SystemExit("one of --graph or --rmat-scale is required")
    edges = preprocess(edges, make_undirected=True)
    if weighted and edges.weight is None:
        edges = assign_weights(edges, 1, 64, seed=args.seed)
    return edges_to_matrix(edges, weighted=weighted), dataset


def _make_descriptor(args) -> Descriptor:
    desc = Descriptor()
    desc.direction = Direction(args.direction)
    desc.switch_ratio = args.switch_ratio
    desc.max_niter = args.max_iters
    desc.num_workers = args.threads if args.threads else (os.cpu_count() or 1)
    return desc


def _run_algorithm(name, A, args, desc):
    if name == "bfs":
        return algorithms.bfs(A, args.source, desc=desc)
    if name == "sssp":
        return algorithms.sssp(A, args.source, desc=desc)
    if name == "pr":
        return algorithms.pagerank(A, alpha=args.alpha, eps=args.eps,
                                   max_iters=args.max_iters, desc=desc)
    if name == "cc":
        return algorithms.connected_components(A, desc=desc)
    if name == "tc":
        return algorithms.triangle_count(A, desc=desc)
    raise SystemExit(f"unknown algorithm {name!r}")


def _digest(result) -> str:
    h = hashlib.sha256()
    if isinstance(result, Vector):
        idx, vals = result.extract_tuples()
        h.update(np.ascontiguousarray(idx).tobytes())
        h.update(np.ascontiguousarray(np.round(np.asarray(vals, dtype=np.float64), 9)).tobytes())
    else:
        h.update(str(int(result)).encode())
    return h.hexdigest()


def _trace_rows(log):
    return [
        {
            "iteration": i + 1,
            "frontier_nvals": d.frontier_nvals,
            "estimated_frontier_edges": d.estimated_frontier_edges,
            "threshold_edges": d.threshold_edges,
            "direction": d.chosen,
        }
        for i, d in enumerate(log)
    ]


def _verify(name, A, args, result) -> bool:
    if name == "bfs":
        expect = reference.bfs_levels(A, args.source)
        return np.array_equal(result.to_dense(0).values, expect)
    if name == "sssp":
        expect = reference.dijkstra(A, args.source)
        got = result.to_dense(np.inf).values
        both = np.isfinite(expect)
        if not np.array_equal(np.isfinite(got), both):
            return False
        return bool(np.allclose(got[both], expect[both]))
    if name == "pr":
        expect = reference.power_iteration_ranks(A, alpha=args.alpha, iters=100)
        got = result.to_dense(0.0).values
        order_got = np.lexsort((np.arange(A.nrows), -np.round(got, 9)))
        order_exp = np.lexsort((np.arange(A.nrows), -np.round(expect, 9)))
        return np.array_equal(order_got, order_exp)
    if name == "cc":
        expect = reference.component_labels(A)
        return reference.same_partition(result.to_dense(0).values, expect)
    if name == "tc":
        if A.nrows > 512:
            raise SystemExit("tc verification is limited to graphs of <= 512 vertices")
        return int(result) == reference.triangle_count(A)
    return False


def run_benchmark(args) -> RunReport:
    t0 = time.perf_counter()
    A, dataset = _load_graph(args)
    load_ms = (time.perf_counter() - t0) * 1e3
    if args.algorithm in ("bfs", "sssp") and not 0 <= args.source < A.nrows:
        raise SystemExit(f"--source {args.source} out of range for {A.nrows} vertices")

    runtimes = []
    result = None
    trace = []
    for _ in range(max(args.runs, 1)):
        desc = _make_descriptor(args)
        t0 = time.perf_counter()
        result = _run_algorithm(args.algorithm, A, args, desc)
        runtimes.append(time.perf_counter() - t0)
        trace = _trace_rows(desc.direction_log)

    mean_s = float(np.mean(runtimes))
    report = RunReport(
        algorithm=args.algorithm,
        dataset=dataset,
        runs=len(runtimes),
        mean_runtime_ms=mean_s * 1e3,
        mteps=A.nnz / mean_s / 1e6 if mean_s > 0 else float("inf"),
        result_digest=_digest(result),
        trace=trace,
        load_time_ms=load_ms,
        nnz=A.nnz,
        nrows=A.nrows,
    )
    if args.verify:
        report.verified = _verify(args.algorithm, A, args, result)
    return report


def dump_direction_trace(args) -> list:
    """Per-iteration (frontier size, estimate, threshold, direction) rows."""
    if args.algorithm not in ("bfs", "sssp"):
        raise SystemExit("--trace applies to traversal algorithms (bfs, sssp)")
    A, _ = _load_graph(args)
    desc = _make_descriptor(args)
    _run_algorithm(args.algorithm, A, args, desc)
    return _trace_rows(desc.direction_log)


def _print_report(report: RunReport, args):
    if args.as_json:
        print(json.dumps(report.to_dict(), indent=2))
        return
    line = (
        f"{report.algorithm} on {report.dataset}: "
        f"{report.runs} runs, mean {report.mean_runtime_ms:.3f} ms, "
        f"{report.mteps:.3f} MTEPS ({report.nnz} edges, {report.nrows} vertices), "
        f"load {report.load_time_ms:.1f} ms, digest {report.result_digest[:16]}"
    )
    print(line)
    if report.verified is not None:
        print(f"verification: {'ok' if report.verified else 'MISMATCH'}")
    if args.trace and report.trace:
        print("iter  frontier  est_edges  threshold  direction")
        for row in report.trace:
            print(f"{row['iteration']:>4}  {row['frontier_nvals']:>8}  "
                  f"{row['estimated_frontier_edges']:>9}  "
                  f"{row['threshold_edges']:>9.1f}  {row['direction']}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run_benchmark(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print_report(report, args)
    if report.verified is False:
        print("error: result does not match the reference implementation",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
