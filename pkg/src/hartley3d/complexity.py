"""Arithmetic-cost accounting: instrumented scalars and the 1D -> 3D lift.

A separable pass over an N^3 block runs 3*N^2 one-dimensional transforms,
so every 1D cost scales by 3*N^2; turning the three separable passes into
the non-separable Hartley spectrum costs a further 3*N^3 additions (three
adds per coefficient in the reflected four-term combination).  The DCT is
separable and skips that overhead.  The permutation stage and negations
are free; subtractions count as additions; the final halving of the
combination is folded into (de)quantization scaling and therefore does not
appear in the transform cost.

CountingScalar wraps any numeric payload and tallies +, -, *, and
bit-shift-equivalent scalings into a shared OpCounter, letting tests
validate the analytical counts against an actual kernel execution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import DyadicRational
from .kernels import (
    SQRT2,
    OpCount,
    candidate_beta,
    count_1d,
    count_dct_1d,
    dct_fast_apply,
    fast_apply,
)


@dataclass
class OpCounter:
    """Mutable tally of operations observed during an instrumented run."""

    multiplications: int = 0
    additions: int = 0
    shifts: int = 0

    def snapshot(self) -> OpCount:
        return OpCount(self.multiplications, self.additions, self.shifts)

    def reset(self) -> None:
        self.multiplications = self.additions = self.shifts = 0


class CountingScalar:
    """A numeric value that records every arithmetic operation it performs.

    Negation is free (sign flips are wiring, not arithmetic) and
    scale_pow2 counts one shift for any nonzero exponent.
    """

    __slots__ = ("value", "counter")

    def __init__(self, value, counter: OpCounter):
        self.value = value
        self.counter = counter

    def _wrap(self, value) -> "CountingScalar":
        return CountingScalar(value, self.counter)

    @staticmethod
    def _raw(other):
        return other.value if isinstance(other, CountingScalar) else other

    def __add__(self, other):
        self.counter.additions += 1
        return self._wrap(self.value + self._raw(other))

    __radd__ = __add__

    def __sub__(self, other):
        self.counter.additions += 1
        return self._wrap(self.value - self._raw(other))

    def __rsub__(self, other):
        self.counter.additions += 1
        return self._wrap(self._raw(other) - self.value)

    def __mul__(self, other):
        self.counter.multiplications += 1
        return self._wrap(self.value * self._raw(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def __pos__(self):
        return self

    def scale_pow2(self, e: int) -> "CountingScalar":
        if e == 0:
            return self
        self.counter.shifts += 1
        return self._wrap(self.value * 2.0**e if isinstance(self.value, float)
                          else self.value * pow(2, e) if e > 0
                          else self.value / pow(2, -e))

    def scaled_free(self, factor) -> "CountingScalar":
        """Scaling attributed to (de)quantization; intentionally uncounted."""
        return self._wrap(self.value * factor)

    def __repr__(self) -> str:
        return f"CountingScalar({self.value!r})"


def wrap_block(values, counter: OpCounter):
    """Wrap a nested list / array structure into CountingScalars."""
    try:
        return [wrap_block(v, counter) for v in values]
    except TypeError:
        return CountingScalar(values, counter)


def unwrap_block(values):
    if isinstance(values, CountingScalar):
        return values.value
    return [unwrap_block(v) for v in values]


@dataclass(frozen=True)
class ComplexityRow:
    """One named method with its per-block 3D operation count."""

    method: str
    op_count_3d: OpCount
    note: str = ""


def lift_3d(c1d: OpCount, n: int, sdht_overhead: bool) -> OpCount:
    """Lift a 1D cost to one N^3 block: 3*N^2 transforms per axis triplet,
    plus 3*N^3 combination additions when the Hartley rearrangement runs."""
    if n < 1:
        raise ValueError(f"transform length must be positive, got {n}")
    base = 3 * n * n
    extra = 3 * n**3 if sdht_overhead else 0
    return OpCount(
        base * c1d.multiplications,
        base * c1d.additions + extra,
        base * c1d.shifts,
    )


def verified_count(kernel, length: int = 8) -> OpCount:
    """Run a 1D kernel once over instrumented scalars and return the tally.

    The kernel receives a list of CountingScalar and must return a
    sequence; only the operation counts are inspected.
    """
    counter = OpCounter()
    x = [CountingScalar(float(i + 1), counter) for i in range(length)]
    kernel(x)
    return counter.snapshot()


class CountingArray:
    """Elementwise batch arithmetic with per-element operation tallies.

    Semantically one CountingScalar per array element: an operation on a
    (B, 8, 8) plane adds B*64 to the tally.  Lets the instrumented
    pipelines cover thousands of blocks at numpy speed while reporting
    the same totals a scalar-by-scalar run would.
    """

    __slots__ = ("data", "counter")

    def __init__(self, data, counter: OpCounter):
        self.data = np.asarray(data)
        self.counter = counter

    @staticmethod
    def _raw(other):
        return other.data if isinstance(other, CountingArray) else other

    def __add__(self, other):
        out = self.data + self._raw(other)
        self.counter.additions += out.size
        return CountingArray(out, self.counter)

    __radd__ = __add__

    def __sub__(self, other):
        out = self.data - self._raw(other)
        self.counter.additions += out.size
        return CountingArray(out, self.counter)

    def __rsub__(self, other):
        out = self._raw(other) - self.data
        self.counter.additions += out.size
        return CountingArray(out, self.counter)

    def __mul__(self, other):
        out = self.data * self._raw(other)
        self.counter.multiplications += out.size
        return CountingArray(out, self.counter)

    __rmul__ = __mul__

    def __neg__(self):
        return CountingArray(-self.data, self.counter)

    def __pos__(self):
        return self

    def scale_pow2(self, e: int) -> "CountingArray":
        if e == 0:
            return self
        out = self.data * 2.0**e
        self.counter.shifts += out.size
        return CountingArray(out, self.counter)

    def scaled_free(self, factor) -> "CountingArray":
        return CountingArray(self.data * factor, self.counter)


def _plane_rounds(blocks: np.ndarray, kernel, wrap) -> np.ndarray:
    """Row-column 3D pass over a (B, 8, 8, 8) stack, one mode per round.

    Each round feeds the kernel eight planes indexed by the current mode
    and restacks its outputs so the next mode is plane-indexed; data
    movement is free, only kernel arithmetic is (optionally) counted.
    """
    raw = CountingArray._raw
    p = [wrap(blocks[:, i]) for i in range(8)]
    o = kernel(p)
    p = [wrap(np.stack([raw(t)[:, j] for t in o], axis=1)) for j in range(8)]
    o = kernel(p)
    p = [wrap(np.stack([raw(t)[:, :, k] for t in o], axis=2)) for k in range(8)]
    o = kernel(p)
    return np.stack([raw(t) for t in o], axis=3)


def _hartley_combination(ys: np.ndarray, counter: OpCounter | None) -> np.ndarray:
    """Four-term reflected combination; 3 counted additions per entry.

    The trailing 1/2 is attributed to (de)quantization scaling, matching
    how the shift-free table rows are derived.
    """

    def refl(t, axes):
        for ax in axes:
            t = np.roll(np.flip(t, axis=ax), 1, axis=ax)
        return t

    if counter is None:
        total = refl(ys, (1,)) + refl(ys, (2,)) + refl(ys, (3,))
        return (total - refl(ys, (1, 2, 3))) * 0.5
    w = CountingArray
    total = (
        w(refl(ys, (1,)), counter)
        + w(refl(ys, (2,)), counter)
        + w(refl(ys, (3,)), counter)
        - w(refl(ys, (1, 2, 3)), counter)
    )
    return total.scaled_free(0.5).data


def _kernel_for(spec):
    if spec.kind == "dct":
        return dct_fast_apply
    beta = SQRT2 if spec.kind == "dht" else candidate_beta(spec.m)
    return lambda planes: fast_apply(planes, beta)


def _check_stack(blocks: np.ndarray) -> None:
    if blocks.ndim != 4 or blocks.shape[1:] != (8, 8, 8):
        raise ValueError(f"expected a (B, 8, 8, 8) stack, got {blocks.shape}")


def batch_transform_3d(blocks: np.ndarray, spec) -> np.ndarray:
    """Uninstrumented shift-add batch pipeline (the bench's timed path)."""
    blocks = np.asarray(blocks, dtype=float)
    _check_stack(blocks)
    ys = _plane_rounds(blocks, _kernel_for(spec), wrap=lambda a: a)
    if spec.kind == "dct":
        return ys
    return _hartley_combination(ys, counter=None)


def count_3d_batch(blocks: np.ndarray, spec) -> tuple[OpCount, np.ndarray]:
    """Instrumented forward 3D transform over a whole block stack.

    Returns the operation tally together with the transform output so
    callers can confirm the counted path computes the same numbers.
    """
    blocks = np.asarray(blocks, dtype=float)
    _check_stack(blocks)
    counter = OpCounter()
    kernel = _kernel_for(spec)
    ys = _plane_rounds(blocks, kernel, wrap=lambda a: CountingArray(a, counter))
    if spec.kind != "dct":
        ys = _hartley_combination(ys, counter)
    return counter.snapshot(), ys


def complexity_table() -> list[ComplexityRow]:
    """Per-block (8x8x8) costs for the seven reference methods."""
    n = 8
    rows = [
        ComplexityRow("3D DCT (row-column, fast 1D DCT)",
                      lift_3d(count_dct_1d(), n, sdht_overhead=False)),
        ComplexityRow("3D DHT (row-column, fast 1D DHT)",
                      lift_3d(count_1d(SQRT2), n, sdht_overhead=True)),
        ComplexityRow("3D DHT (split-radix)",
                      lift_3d(count_1d(SQRT2), n, sdht_overhead=True),
                      note="cost model only; algorithm not implemented here"),
    ]
    for m, label in ((8, "beta=1"), (11, "beta=11/8"), (12, "beta=3/2"), (16, "beta=2")):
        rows.append(
            ComplexityRow(
                f"3D DHT approximation ({label})",
                lift_3d(count_1d(DyadicRational(m, 3)), n, sdht_overhead=True),
            )
        )
    return rows
