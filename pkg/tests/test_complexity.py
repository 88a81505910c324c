"""Instrumented arithmetic and the 1D-to-3D cost lift."""

import numpy as np
import pytest

from hartley3d.complexity import (
    ComplexityRow,
    CountingArray,
    CountingScalar,
    OpCounter,
    batch_transform_3d,
    complexity_table,
    count_3d_batch,
    lift_3d,
    unwrap_block,
    verified_count,
    wrap_block,
)
from hartley3d.kernels import (
    SQRT2,
    OpCount,
    candidate_beta,
    count_1d,
    count_dct_1d,
    dct_fast_apply,
    fast_apply,
)
from hartley3d.tensor3 import TransformSpec, batch_forward

RNG = np.random.default_rng(4242)


class TestCountingScalar:
    def test_tallies(self):
        c = OpCounter()
        x = CountingScalar(3.0, c)
        y = CountingScalar(4.0, c)
        z = (x + y) * x - y
        assert z.value == 17.0
        assert c.snapshot() == OpCount(1, 2, 0)

    def test_reflected_operands(self):
        c = OpCounter()
        x = CountingScalar(3.0, c)
        assert (1.0 + x).value == 4.0
        assert (1.0 - x).value == -2.0
        assert (2.0 * x).value == 6.0
        assert c.snapshot() == OpCount(1, 2, 0)

    def test_negation_is_free(self):
        c = OpCounter()
        x = CountingScalar(3.0, c)
        assert (-x).value == -3.0
        assert (+x).value == 3.0
        assert c.snapshot() == OpCount(0, 0, 0)

    def test_shift_counting(self):
        c = OpCounter()
        x = CountingScalar(3.0, c)
        assert x.scale_pow2(-1).value == 1.5
        assert x.scale_pow2(0) is x
        assert c.snapshot() == OpCount(0, 0, 1)

    def test_scaled_free_is_uncounted(self):
        c = OpCounter()
        x = CountingScalar(3.0, c)
        assert x.scaled_free(0.5).value == 1.5
        assert c.snapshot() == OpCount(0, 0, 0)

    def test_counter_reset(self):
        c = OpCounter()
        CountingScalar(1.0, c) + CountingScalar(2.0, c)
        c.reset()
        assert c.snapshot() == OpCount(0, 0, 0)

    def test_wrap_unwrap_roundtrip(self):
        c = OpCounter()
        nested = [[1.0, 2.0], [3.0, 4.0]]
        assert unwrap_block(wrap_block(nested, c)) == nested


class TestCountingArray:
    def test_tallies_by_size(self):
        c = OpCounter()
        a = CountingArray(np.ones((2, 3)), c)
        b = CountingArray(np.full((2, 3), 2.0), c)
        out = a + b
        assert np.array_equal(out.data, np.full((2, 3), 3.0))
        assert c.additions == 6
        out = a * b
        assert c.multiplications == 6
        out = a - 1.0
        assert c.additions == 12
        out = a.scale_pow2(1)
        assert c.shifts == 6
        assert np.array_equal(out.data, np.full((2, 3), 2.0))

    def test_free_operations(self):
        c = OpCounter()
        a = CountingArray(np.ones(4), c)
        (-a), (+a), a.scale_pow2(0), a.scaled_free(0.5)
        assert c.snapshot() == OpCount(0, 0, 0)


class TestVerifiedCounts:
    def test_all_grid_candidates(self):
        for m in range(1, 25):
            beta = candidate_beta(m)
            got = verified_count(lambda x: fast_apply(x, beta))
            assert got == count_1d(beta), f"m={m}"

    def test_exact_kernels(self):
        assert verified_count(lambda x: fast_apply(x, SQRT2)) == count_1d(SQRT2)
        assert verified_count(dct_fast_apply) == count_dct_1d()


class TestLift:
    def test_scales_by_plane_count(self):
        got = lift_3d(OpCount(1, 2, 3), 8, sdht_overhead=False)
        assert got.as_tuple() == (192, 384, 576)

    def test_adds_combination_overhead(self):
        got = lift_3d(OpCount(1, 2, 3), 8, sdht_overhead=True)
        assert got.as_tuple() == (192, 384 + 1536, 576)

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            lift_3d(OpCount(0, 0, 0), 0, sdht_overhead=False)

    def test_reference_table(self):
        rows = complexity_table()
        assert [r.op_count_3d.as_tuple() for r in rows] == [
            (2112, 5568, 0),
            (384, 5760, 0),
            (384, 5760, 0),
            (0, 5760, 0),
            (0, 6528, 768),
            (0, 6144, 384),
            (0, 5760, 384),
        ]
        assert all(isinstance(r, ComplexityRow) for r in rows)
        assert rows[2].note  # the split-radix row is a cost model only


class TestBatchCounting:
    @pytest.mark.parametrize(
        "spec",
        [
            TransformSpec("dct"),
            TransformSpec("dht"),
            TransformSpec("approx", 11),
            TransformSpec("approx", 16, "paired", 8),
        ],
        ids=lambda s: s.label(),
    )
    def test_counts_scale_with_block_count(self, spec):
        blocks = RNG.integers(0, 256, size=(4, 8, 8, 8)).astype(float)
        counts, _ = count_3d_batch(blocks, spec)
        if spec.kind == "dct":
            per_block = lift_3d(count_dct_1d(), 8, sdht_overhead=False)
        elif spec.kind == "dht":
            per_block = lift_3d(count_1d(SQRT2), 8, sdht_overhead=True)
        else:
            per_block = lift_3d(count_1d(candidate_beta(spec.m)), 8,
                                sdht_overhead=True)
        assert counts == per_block.scaled(4)

    def test_counted_output_matches_batch_forward(self):
        blocks = RNG.integers(0, 256, size=(4, 8, 8, 8)).astype(float)
        for spec in (TransformSpec("dht"), TransformSpec("approx", 12)):
            _, out = count_3d_batch(blocks, spec)
            want = batch_forward(blocks, spec)
            assert np.max(np.abs(out - want)) < 1e-9

    def test_timed_path_equals_counted_path(self):
        blocks = RNG.integers(0, 256, size=(4, 8, 8, 8)).astype(float)
        spec = TransformSpec("approx", 11)
        _, counted = count_3d_batch(blocks, spec)
        assert np.array_equal(batch_transform_3d(blocks, spec), counted)

    def test_dct_output_scaling(self):
        # the fast DCT kernel emits sqrt(8)-scaled outputs on every axis
        blocks = RNG.integers(0, 256, size=(2, 8, 8, 8)).astype(float)
        _, out = count_3d_batch(blocks, TransformSpec("dct"))
        want = batch_forward(blocks, TransformSpec("dct")) * 8.0**1.5
        assert np.max(np.abs(out - want)) < 1e-8

    def test_rejects_bad_stack(self):
        with pytest.raises(ValueError):
            batch_transform_3d(np.zeros((8, 8, 8)), TransformSpec("dht"))
        with pytest.raises(ValueError):
            count_3d_batch(np.zeros((2, 8, 4, 8)), TransformSpec("dht"))
