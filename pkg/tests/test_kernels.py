"""Kernel behavior: multiplies, masks, counters, direction choice, elementwise."""

import numpy as np
import pytest

from helpers import (
    TABLE_SEMIRINGS,
    assert_same_vector,
    complete_graph,
    eight_vertex_graph,
    make_instance,
    oracle_masked_matmul,
    oracle_mxv,
    path_graph,
    random_mask,
    random_matrix,
    random_vector,
)

from graphalg import (
    Descriptor,
    Direction,
    MaskMode,
    Partition,
    SparseMatrix,
    Vector,
    apply,
    assign,
    assign_scatter,
    builtin_monoid,
    builtin_semiring,
    decide_direction,
    ewise_add,
    ewise_mult,
    extract_gather,
    matrix_build,
    mxm_masked,
    mxv,
    reduce,
    reduce_rows,
    spmspv_push,
    spmv_pull,
    transpose,
    vector_build,
    vector_fill,
    vxm,
)
from graphalg.algebra import LESS, MINUS
from graphalg.errors import FormatError, ShapeError

BOOLEAN = builtin_semiring("LogicalOrAnd")
PLUS_TIMES = builtin_semiring("PlusMultiplies")
MIN_PLUS = builtin_semiring("MinPlus")
PLUS = builtin_monoid("Plus")
MINIMUM = builtin_monoid("Minimum")


# ---------------------------------------------------------------------------
# mxv / vxm against the dense oracle
# ---------------------------------------------------------------------------

class TestMxvOracle:
    @pytest.mark.parametrize("name", TABLE_SEMIRINGS)
    def test_random_instances(self, name):
        rng = np.random.default_rng(hash(name) % 2**32)
        for trial in range(15):
            semiring, A, u = make_instance(rng, name, n=16, density=0.3)
            for mode in ("none", "normal", "complement"):
                mask = None if mode == "none" else random_mask(rng, 16)
                desc = Descriptor()
                if mode == "complement":
                    desc.toggle("mask")
                got = mxv(semiring, A, u, mask=mask, desc=desc)
                idx, vals = oracle_mxv(semiring, A, u, mask=mask,
                                       complement=(mode == "complement"))
                assert_same_vector(got, idx, vals)

    def test_plus_times_matches_dense_gemv(self):
        rng = np.random.default_rng(99)
        A = random_matrix(rng, 16, 16, 0.3)
        u = random_vector(rng, 16, 10)
        got = mxv(PLUS_TIMES, A, u)
        dense = np.zeros((16, 16))
        r, c, v = A.extract_tuples()
        dense[r, c] = v
        ud = u.to_dense(0).values
        y = dense @ ud
        idx = np.flatnonzero(y != 0)
        assert_same_vector(got, idx, y[idx])

    def test_empty_input_vector(self):
        A = eight_vertex_graph()
        u = Vector.empty(8)
        w = mxv(BOOLEAN, A, u)
        assert w.nvals == 0

    def test_running_example_step(self):
        # frontier {0,2,3}, visited {0,1,2,3}; next frontier is {4,7}
        A = eight_vertex_graph()
        frontier = vector_build([0, 2, 3], [1, 1, 1], 8)
        visited = vector_build([0, 1, 2, 3], [1, 1, 1, 1], 8)
        desc = Descriptor()
        desc.toggle("mask")
        w = vxm(BOOLEAN, frontier, A, mask=visited, desc=desc)
        idx, vals = w.extract_tuples()
        assert idx.tolist() == [4, 7]
        assert vals.tolist() == [1, 1]

    def test_shape_errors(self):
        A = eight_vertex_graph()
        with pytest.raises(ShapeError):
            mxv(BOOLEAN, A, vector_build([0], [1], 5))
        with pytest.raises(ShapeError):
            mxv(BOOLEAN, A, vector_build([0], [1], 8), mask=vector_fill(5, 1))


class TestVxm:
    def test_path_graph_single_edge(self):
        # vertices 0-1-2 with directed edge (0, 1) only
        A = matrix_build([(0, 1, 1)], 3, 3)
        w = vxm(BOOLEAN, vector_build([0], [1], 3), A)
        idx, vals = w.extract_tuples()
        assert idx.tolist() == [1] and vals.tolist() == [1]

    def test_vxm_equals_mxv_of_transpose(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            semiring, A, u = make_instance(rng, "PlusMultiplies", n=12, density=0.4)
            a = vxm(semiring, u, A)
            b = mxv(semiring, transpose(A), u)
            ai, av = a.extract_tuples()
            bi, bv = b.extract_tuples()
            assert np.array_equal(ai, bi) and np.array_equal(av, bv)

    def test_vxm_honors_inp1_toggle(self):
        rng = np.random.default_rng(4)
        semiring, A, u = make_instance(rng, "PlusMultiplies", n=10, density=0.4)
        desc = Descriptor()
        desc.toggle("inp1")
        a = vxm(semiring, u, A, desc=desc)
        b = mxv(semiring, A, u)
        assert_same_vector(a, *b.extract_tuples())


# ---------------------------------------------------------------------------
# push/pull equivalence and work accounting
# ---------------------------------------------------------------------------

class TestPushPullEquivalence:
    @pytest.mark.parametrize("name", TABLE_SEMIRINGS)
    def test_same_canonical_output(self, name):
        rng = np.random.default_rng(hash(name) % 1000 + 5)
        for _ in range(10):
            semiring, A, u = make_instance(rng, name, n=16, density=0.3)
            for mode in ("none", "normal", "complement"):
                mask = None if mode == "none" else random_mask(rng, 16)
                desc = Descriptor()
                if mode == "complement":
                    desc.toggle("mask")
                dtype = np.result_type(A.csr_values, u.values)
                ident = semiring.add.identity_for(dtype)
                pull = spmv_pull(semiring, A, u.to_dense(ident), mask=mask, desc=desc)
                push = spmspv_push(semiring, A, u, mask=mask, desc=desc)
                pi, pv = pull.extract_tuples()
                qi, qv = push.extract_tuples()
                assert np.array_equal(pi, qi)
                if pv.dtype.kind == "f":
                    assert np.allclose(pv, qv, rtol=1e-10, atol=0)
                else:
                    assert np.array_equal(pv, qv)


class TestWorkCounters:
    def test_unmasked_pull_reads_every_stored_entry(self):
        A = eight_vertex_graph()
        desc = Descriptor()
        spmv_pull(BOOLEAN, A, vector_fill(8, 1, dtype=np.int64), desc=desc)
        assert desc.counters.matrix_entries_read == 20

    def test_masked_pull_reads_allowed_rows_only(self):
        A = eight_vertex_graph()
        desc = Descriptor()
        mask = vector_build([4, 6, 7], [1, 1, 1], 8)
        spmv_pull(BOOLEAN, A, vector_fill(8, 1, dtype=np.int64), mask=mask, desc=desc)
        lens = np.diff(A.row_offsets)
        assert desc.counters.matrix_entries_read == lens[4] + lens[6] + lens[7]

    def test_all_zero_mask_reads_nothing(self):
        A = eight_vertex_graph()
        desc = Descriptor()
        mask = vector_fill(8, 0, dtype=np.int64)
        out = spmv_pull(BOOLEAN, A, vector_fill(8, 1, dtype=np.int64), mask=mask, desc=desc)
        assert desc.counters.matrix_entries_read == 0
        assert out.nvals == 0

    def test_push_multiplies_equal_frontier_column_sizes(self):
        # via the transposed orientation: columns are out-edge lists
        A = eight_vertex_graph()
        desc = Descriptor()
        desc.toggle("inp0")
        frontier = vector_build([0, 2, 3], [1, 1, 1], 8)
        spmspv_push(BOOLEAN, A, frontier, desc=desc)
        assert desc.counters.semiring_multiplies == 8

    def test_push_single_column_is_column_structure(self):
        A = eight_vertex_graph()
        u = vector_build([2], [1], 8)
        w = spmspv_push(BOOLEAN, A, u)
        # column A(:,2) holds the rows that point at vertex 2
        expect = A.row_indices[A.col_offsets[2]:A.col_offsets[3]]
        assert w.extract_tuples()[0].tolist() == expect.tolist()

    def test_push_flops_random(self):
        rng = np.random.default_rng(21)
        A = random_matrix(rng, 32, 32, 0.2)
        u = random_vector(rng, 32, 10)
        desc = Descriptor()
        spmspv_push(MIN_PLUS, A, u, desc=desc)
        col_lens = np.diff(A.col_offsets)
        assert desc.counters.semiring_multiplies == int(col_lens[u.indices].sum())

    def test_push_matches_min_plus_oracle(self):
        rng = np.random.default_rng(22)
        A = random_matrix(rng, 32, 32, 0.2)
        u = random_vector(rng, 32, 10)
        got = spmspv_push(MIN_PLUS, A, u)
        idx, vals = oracle_mxv(MIN_PLUS, A, u)
        assert_same_vector(got, idx, vals)

    def test_format_contract_violations(self):
        A = eight_vertex_graph()
        with pytest.raises(FormatError):
            spmv_pull(BOOLEAN, A, vector_build([0], [1], 8))
        with pytest.raises(FormatError):
            spmspv_push(BOOLEAN, A, vector_fill(8, 1, dtype=np.int64))

    def test_push_needs_column_layout(self):
        A = matrix_build([(0, 1, 1)], 2, 2, build_csc=False)
        with pytest.raises(FormatError):
            spmspv_push(BOOLEAN, A, vector_build([0], [1], 2))

    def test_early_exit_reads_fewer_never_changes_result(self):
        rng = np.random.default_rng(23)
        A = random_matrix(rng, 24, 24, 0.4, low=1, high=1)
        u = random_vector(rng, 24, 20, low=1, high=1)
        exact = Descriptor()
        w1 = spmv_pull(BOOLEAN, A, u.to_dense(0), desc=exact)
        eager = Descriptor()
        eager.early_exit = True
        w2 = spmv_pull(BOOLEAN, A, u.to_dense(0), desc=eager)
        assert np.array_equal(w1.values, w2.values)
        assert eager.counters.matrix_entries_read <= exact.counters.matrix_entries_read
        assert exact.counters.matrix_entries_read == A.nnz


class TestMaskRule:
    def test_no_output_where_mask_zero(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            semiring, A, u = make_instance(rng, "PlusMultiplies", n=12, density=0.5)
            mask = random_mask(rng, 12, dense=bool(rng.integers(0, 2)))
            for complement in (False, True):
                desc = Descriptor()
                if complement:
                    desc.toggle("mask")
                w = mxv(semiring, A, u, mask=mask, desc=desc)
                idx, _ = w.extract_tuples()
                allowed = np.zeros(12, dtype=bool)
                if mask.is_sparse:
                    allowed[mask.indices[mask.values != 0]] = True
                else:
                    allowed = mask.values != 0
                if complement:
                    allowed = ~allowed
                assert allowed[idx].all()

    def test_stored_false_mask_entry_blocks_write(self):
        A = path_graph(3)
        u = vector_fill(3, 1, dtype=np.int64)
        mask = vector_build([0, 1], [1, 0], 3)  # stored false at 1
        w = mxv(BOOLEAN, A, u, mask=mask)
        assert w.extract_tuples()[0].tolist() == [0]

    def test_complement_equals_negated_dense_mask(self):
        rng = np.random.default_rng(32)
        for _ in range(15):
            semiring, A, u = make_instance(rng, "MinPlus", n=14, density=0.4)
            mask = random_mask(rng, 14, dense=True)
            desc = Descriptor()
            desc.toggle("mask")
            a = mxv(semiring, A, u, mask=mask, desc=desc)
            negated = Vector.dense_of((mask.values == 0).astype(np.int64), 0)
            b = mxv(semiring, A, u, mask=negated)
            assert_same_vector(a, *b.extract_tuples())


# ---------------------------------------------------------------------------
# direction decision
# ---------------------------------------------------------------------------

def _graph_with(nnz, nrows):
    rows = np.repeat(np.arange(nrows), nnz // nrows)
    cols = (np.arange(nnz) % nrows)
    return SparseMatrix.from_tuples(rows, cols, np.ones(nnz, np.int64), nrows, nrows,
                                    dedup=builtin_monoid("Plus"))


class TestDecideDirection:
    def test_small_frontier_pushes(self):
        A = _graph_with(1000, 100)
        assert A.nnz == 1000
        u = random_vector(np.random.default_rng(1), 100, 5)
        d = decide_direction(u, A)
        assert d.estimated_frontier_edges == 50
        assert d.chosen == "push"

    def test_large_frontier_pulls(self):
        A = _graph_with(1000, 100)
        u = random_vector(np.random.default_rng(2), 100, 11)
        d = decide_direction(u, A)
        assert d.estimated_frontier_edges == 110
        assert d.chosen == "pull"

    def test_empty_frontier_pushes(self):
        A = _graph_with(1000, 100)
        d = decide_direction(Vector.empty(100), A)
        assert d.estimated_frontier_edges == 0
        assert d.chosen == "push"

    def test_tie_chooses_push(self):
        A = _graph_with(1000, 100)
        u = random_vector(np.random.default_rng(3), 100, 10)
        d = decide_direction(u, A)
        assert d.estimated_frontier_edges == 100
        assert d.threshold_edges == 100.0
        assert d.chosen == "push"

    def test_empty_matrix_pushes(self):
        A = matrix_build([], 4, 4)
        d = decide_direction(vector_fill(4, 1, dtype=np.int64), A)
        assert d.chosen == "push"

    def test_forced_policies(self):
        A = _graph_with(1000, 100)
        u = random_vector(np.random.default_rng(4), 100, 50)
        desc = Descriptor()
        desc.direction = Direction.FORCE_PUSH
        assert decide_direction(u, A, desc).chosen == "push"
        desc.direction = Direction.FORCE_PULL
        assert decide_direction(u, A, desc).chosen == "pull"

    def test_monotone_in_frontier_size(self):
        A = _graph_with(1000, 100)
        rng = np.random.default_rng(5)
        seen_pull = False
        for k in range(0, 101, 5):
            u = random_vector(rng, 100, k) if k else Vector.empty(100)
            chosen = decide_direction(u, A).chosen
            if seen_pull:
                assert chosen == "pull"
            seen_pull = seen_pull or chosen == "pull"
        assert seen_pull

    def test_invariant_pull_iff_estimate_exceeds_threshold(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(2, 60))
            A = random_matrix(rng, n, n, float(rng.uniform(0.05, 0.6)))
            u = random_vector(rng, n, int(rng.integers(0, n + 1)))
            d = decide_direction(u, A)
            assert (d.chosen == "pull") == (d.estimated_frontier_edges > d.threshold_edges)


# ---------------------------------------------------------------------------
# masked matrix multiply
# ---------------------------------------------------------------------------

def lower_triangle(A):
    rows, cols, vals = A.extract_tuples()
    keep = rows > cols
    return SparseMatrix.from_tuples(rows[keep], cols[keep], vals[keep], A.nrows, A.ncols)


class TestMxmMasked:
    def test_triangle_graph_single_wedge(self):
        L = lower_triangle(complete_graph(3))
        desc = Descriptor()
        desc.toggle("inp1")
        C = mxm_masked(PLUS_TIMES, L, L, mask=L, desc=desc)
        assert C.nnz == 1
        _, _, vals = C.extract_tuples()
        assert vals.tolist() == [1]

    def test_empty_mask_gives_empty_product(self):
        A = complete_graph(4)
        empty = matrix_build([], 4, 4)
        C = mxm_masked(PLUS_TIMES, A, A, mask=empty)
        assert C.nnz == 0

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            A = random_matrix(rng, 12, 12, 0.35, low=0, high=1)
            B = random_matrix(rng, 12, 12, 0.35, low=0, high=1)
            mask = random_matrix(rng, 12, 12, 0.3, low=1, high=1)
            C = mxm_masked(PLUS_TIMES, A, B, mask=mask)
            er, ec, ev = oracle_masked_matmul(PLUS_TIMES, A, B, mask)
            gr, gc, gv = C.extract_tuples()
            assert np.array_equal(gr, er) and np.array_equal(gc, ec)
            assert np.array_equal(gv, ev.astype(gv.dtype))

    def test_transposed_second_operand(self):
        rng = np.random.default_rng(42)
        A = random_matrix(rng, 10, 10, 0.4, low=1, high=3)
        B = random_matrix(rng, 10, 10, 0.4, low=1, high=3)
        mask = random_matrix(rng, 10, 10, 0.4, low=1, high=1)
        desc = Descriptor()
        desc.toggle("inp1")
        C = mxm_masked(PLUS_TIMES, A, B, mask=mask, desc=desc)
        er, ec, ev = oracle_masked_matmul(PLUS_TIMES, A, B, mask, transpose_b=True)
        gr, gc, gv = C.extract_tuples()
        assert np.array_equal(gr, er) and np.array_equal(gc, ec)
        assert np.array_equal(gv, ev.astype(gv.dtype))

    def test_output_never_denser_than_mask(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            A = random_matrix(rng, 16, 16, 0.5)
            mask = random_matrix(rng, 16, 16, 0.2, low=1, high=1)
            C = mxm_masked(PLUS_TIMES, A, A, mask=mask)
            assert C.nnz <= mask.nnz

    def test_shape_errors(self):
        A = random_matrix(np.random.default_rng(44), 4, 4, 0.5)
        B = random_matrix(np.random.default_rng(45), 5, 5, 0.5)
        with pytest.raises(ShapeError):
            mxm_masked(PLUS_TIMES, A, B, mask=A)


# ---------------------------------------------------------------------------
# elementwise, assign, gather, apply, reduce
# ---------------------------------------------------------------------------

class TestElementwise:
    def test_add_disjoint_union(self):
        w = ewise_add(PLUS, vector_build([0], [1], 4), vector_build([1], [2], 4))
        idx, vals = w.extract_tuples()
        assert idx.tolist() == [0, 1] and vals.tolist() == [1, 2]

    def test_add_overlap_min(self):
        w = ewise_add(MINIMUM, vector_build([0], [1], 4), vector_build([0], [3], 4))
        idx, vals = w.extract_tuples()
        assert idx.tolist() == [0] and vals.tolist() == [1]

    def test_add_scalar_broadcast(self):
        p = vector_fill(2, 0.5)
        w = ewise_add(PLUS_TIMES, p, (1.0 - 0.85) / 2)
        assert np.allclose(w.values, [0.575, 0.575])

    def test_mult_intersection(self):
        u = vector_build([0, 1], [2, 3], 4)
        v = vector_build([1, 2], [5, 7], 4)
        w = ewise_mult(builtin_monoid("Multiplies"), u, v)
        idx, vals = w.extract_tuples()
        assert idx.tolist() == [1] and vals.tolist() == [15]

    def test_mult_with_empty(self):
        u = vector_build([0, 1], [2, 3], 4)
        assert ewise_mult(PLUS_TIMES, u, Vector.empty(4)).nvals == 0

    def test_improvement_detector_pattern(self):
        # entries strictly below a ceiling vector count as improvements
        v = Vector.dense_of(np.array([0.0, 4.0, np.inf]), np.inf)
        ceiling = vector_fill(3, np.finfo(np.float64).max)
        flags = ewise_mult(builtin_semiring("PlusLess"), v, ceiling)
        assert float(reduce(PLUS, flags)) == 2.0

    def test_union_and_intersection_supports_random(self):
        rng = np.random.default_rng(51)
        for _ in range(30):
            n = int(rng.integers(1, 40))
            u = random_vector(rng, n, int(rng.integers(0, n + 1)))
            v = random_vector(rng, n, int(rng.integers(0, n + 1)))
            su, sv = set(u.indices.tolist()), set(v.indices.tolist())
            assert set(ewise_add(PLUS, u, v).extract_tuples()[0].tolist()) == su | sv
            got = set(ewise_mult(PLUS_TIMES, u, v).extract_tuples()[0].tolist())
            # intersection entries whose product is zero drop from the
            # canonical form; with values >= 1 that never happens
            assert got == su & sv

    def test_add_shape_error(self):
        with pytest.raises(ShapeError):
            ewise_add(PLUS, vector_fill(3, 1), vector_fill(4, 1))


class TestAssignAndGather:
    def test_assign_levels_at_frontier(self):
        v = vector_fill(8, 0, dtype=np.int64)
        f = vector_build([0, 2, 3], [1, 1, 1], 8)
        assign(v, 2, mask=f)
        assert v.values.tolist() == [2, 0, 2, 2, 0, 0, 0, 0]

    def test_assign_empty_mask_noop(self):
        v = vector_fill(4, 7, dtype=np.int64)
        assign(v, 9, mask=Vector.empty(4))
        assert v.values.tolist() == [7, 7, 7, 7]

    def test_assign_complemented_mask(self):
        v = vector_fill(4, 0, dtype=np.int64)
        desc = Descriptor()
        desc.toggle("mask")
        assign(v, 5, mask=vector_build([1], [1], 4), desc=desc)
        assert v.values.tolist() == [5, 0, 5, 5]

    def test_scatter_single(self):
        w = vector_fill(4, 0, dtype=np.int64)
        assign_scatter(w, values=vector_build([0], [9], 4), indices=vector_build([0], [2], 4))
        assert w.values.tolist() == [0, 0, 9, 0]

    def test_scatter_collision_takes_minimum(self):
        w = vector_fill(3, 100, dtype=np.int64)
        values = Vector.dense_of(np.array([7, 4, 9]), -1)
        targets = Vector.dense_of(np.array([1, 1, 1]), -1)
        assign_scatter(w, values=values, indices=targets)
        assert w.values.tolist() == [100, 4, 100]

    def test_scatter_out_of_range(self):
        w = vector_fill(3, 0, dtype=np.int64)
        with pytest.raises(IndexError):
            assign_scatter(w, values=vector_build([0], [1], 3),
                           indices=vector_build([0], [5], 3))

    def test_gather_parent_chase(self):
        u = Vector.dense_of(np.array([1, 0, 0]), -1)
        idx = Vector.dense_of(np.array([1, 0, 0]), -1)
        w = Vector.empty(3)
        extract_gather(w, u, idx)
        assert w.values.tolist() == [0, 1, 1]

    def test_gather_identity_permutation(self):
        u = Vector.dense_of(np.array([5, 6, 7]), -1)
        idx = Vector.dense_of(np.arange(3), -1)
        w = Vector.empty(3)
        extract_gather(w, u, idx)
        assert w.values.tolist() == [5, 6, 7]

    def test_gather_empty_indices(self):
        w = vector_fill(3, 1, dtype=np.int64)
        extract_gather(w, Vector.dense_of(np.arange(3), -1), Vector.empty(3))
        assert w.nvals == 0

    def test_gather_out_of_range(self):
        with pytest.raises(IndexError):
            extract_gather(Vector.empty(3), Vector.dense_of(np.arange(3), -1),
                           Vector.dense_of(np.array([0, 1, 7]), -1))


class TestApplyReduceTranspose:
    def test_masked_apply_filters(self):
        u = Vector.dense_of(np.array([1.0, 2.0, 3.0]), 0.0)
        m = vector_build([0, 2], [1, 1], 3)
        w = apply(lambda x: x * 10, u, mask=m)
        idx, vals = w.extract_tuples()
        assert idx.tolist() == [0, 2] and vals.tolist() == [10.0, 30.0]

    def test_reduce_examples(self):
        assert int(reduce(PLUS, vector_build([0, 3, 5], [1, 2, 3], 8))) == 6
        assert int(reduce(PLUS, Vector.empty(8))) == 0

    def test_reduce_rows_out_degrees(self):
        degrees = reduce_rows(PLUS, path_graph(3))
        assert degrees.values.tolist() == [1, 2, 1]

    def test_transpose_swaps_layouts(self):
        A = eight_vertex_graph()
        T = transpose(A)
        r, c, v = T.extract_tuples()
        er, ec, ev = A.extract_tuples()
        order = np.lexsort((er, ec))
        assert np.array_equal(r, ec[order])
        assert np.array_equal(c, er[order])
        assert np.array_equal(v, ev[order])


# ---------------------------------------------------------------------------
# worker partitioning
# ---------------------------------------------------------------------------

class TestPartitioning:
    @pytest.mark.parametrize("mode", [Partition.NONZERO_SPLIT, Partition.ROW_SPLIT])
    @pytest.mark.parametrize("workers", [1, 2, 4, 7])
    def test_pull_identical_across_worker_counts(self, mode, workers):
        rng = np.random.default_rng(61)
        A = random_matrix(rng, 50, 50, 0.2)
        u = random_vector(rng, 50, 30).to_dense(0)
        base = spmv_pull(PLUS_TIMES, A, u)
        desc = Descriptor()
        desc.num_workers = workers
        desc.partition = mode
        got = spmv_pull(PLUS_TIMES, A, u, desc=desc)
        assert np.array_equal(base.values, got.values)

    def test_masked_counts_survive_partitioning(self):
        A = eight_vertex_graph()
        mask = vector_build([4, 6, 7], [1, 1, 1], 8)
        lens = np.diff(A.row_offsets)
        for workers in (1, 3, 8):
            desc = Descriptor()
            desc.num_workers = workers
            spmv_pull(BOOLEAN, A, vector_fill(8, 1, dtype=np.int64), mask=mask, desc=desc)
            assert desc.counters.matrix_entries_read == lens[4] + lens[6] + lens[7]
