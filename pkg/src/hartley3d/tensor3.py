"""Third-order tensor transforms built from 8-point kernels.

The separable 3D Hartley transform (SDHT) applies a Hartley matrix along
each of the three tensor modes.  The true 3D Hartley transform, whose
kernel is cas of the *sum* of the three angles, is not separable, but it
is recoverable from the SDHT by combining four index-reflected copies:

    Y[k1,k2,k3] = (Ys[-k1,k2,k3] + Ys[k1,-k2,k3]
                   + Ys[k1,k2,-k3] - Ys[-k1,-k2,-k3]) / 2

with indices modulo the axis length.  Every Hartley matrix used here,
exact or approximate, commutes with that index reflection, which is what
makes the same combination usable on the inverse side.

Inverse transforms follow the quasi-orthogonal recipe: scale each
coefficient by a diagonal correction (an outer product of per-axis
diagonals, mergeable into dequantization), apply the inverse-side matrix
along each mode, then the half-sum combination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, InvalidConfiguration
from .kernels import (
    CANDIDATE_MS,
    diagonal_correction,
    exact_dct_matrix,
    exact_dht_matrix,
    float_candidate,
    gram_inverse_diagonal,
    matrix_inverse,
    rational_candidate,
)

#: a Tensor3 is any dense 3-way numpy array (axis 3 fastest-varying)
Tensor3 = np.ndarray

KINDS = ("dht", "dct", "approx")
POLICIES = ("involutional", "paired", "exact_inverse")


@dataclass(frozen=True)
class TransformSpec:
    """Names a 3D transform and how it is inverted.

    kind "dht" and "dct" are the exact float kernels and always invert
    exactly; kind "approx" is the multiplierless Hartley H(1, m/8), for
    which the inverse may reuse the same matrix ("involutional"), use a
    second grid matrix q ("paired"), or the true matrix inverse
    ("exact_inverse").
    """

    kind: str
    m: int | None = None
    inverse_policy: str = "exact_inverse"
    q: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidConfiguration(f"unknown transform kind {self.kind!r}")
        if self.inverse_policy not in POLICIES:
            raise InvalidConfiguration(f"unknown inverse policy {self.inverse_policy!r}")
        if self.kind == "approx":
            if self.m not in CANDIDATE_MS:
                raise InvalidConfiguration(
                    f"approx kind requires m in 1..24, got {self.m}"
                )
            if self.inverse_policy == "paired":
                if self.q not in CANDIDATE_MS:
                    raise InvalidConfiguration(
                        f"paired policy requires q in 1..24, got {self.q}"
                    )
            elif self.q is not None:
                raise InvalidConfiguration(
                    f"policy {self.inverse_policy!r} does not take q"
                )
        else:
            if self.m is not None or self.q is not None:
                raise InvalidConfiguration(f"kind {self.kind!r} does not take m or q")
            if self.inverse_policy != "exact_inverse":
                raise InvalidConfiguration(
                    f"kind {self.kind!r} admits only the exact inverse"
                )

    @property
    def is_hartley(self) -> bool:
        return self.kind != "dct"

    def label(self) -> str:
        if self.kind == "approx":
            if self.inverse_policy == "paired":
                return f"approx(m={self.m}, paired q={self.q})"
            return f"approx(m={self.m}, {self.inverse_policy})"
        return self.kind


def i_mode_product(t: Tensor3, matrix: np.ndarray, mode: int) -> Tensor3:
    """Contract matrix columns against tensor mode i (1-based, 1..3)."""
    if mode not in (1, 2, 3):
        raise DimensionMismatch(f"mode must be 1, 2 or 3, got {mode}")
    t = np.asarray(t)
    matrix = np.asarray(matrix)
    if t.ndim != 3:
        raise DimensionMismatch(f"expected a third-order tensor, got ndim={t.ndim}")
    if matrix.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={matrix.ndim}")
    if matrix.shape[1] != t.shape[mode - 1]:
        raise DimensionMismatch(
            f"matrix has {matrix.shape[1]} columns but mode {mode} has "
            f"extent {t.shape[mode - 1]}"
        )
    out = np.tensordot(matrix, t, axes=(1, mode - 1))
    return np.moveaxis(out, 0, mode - 1)


def _axis_matrices(matrices) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(matrices, np.ndarray) and matrices.ndim == 2:
        return (matrices, matrices, matrices)
    m1, m2, m3 = matrices
    return (np.asarray(m1), np.asarray(m2), np.asarray(m3))


def sdht3_forward(t: Tensor3, matrices) -> Tensor3:
    """Separable 3D transform: t x1 M1 x2 M2 x3 M3.

    matrices is a single matrix (used on every mode) or a 3-tuple.
    """
    out = np.asarray(t)
    for mode, m in enumerate(_axis_matrices(matrices), start=1):
        out = i_mode_product(out, m, mode)
    return out


def _reflect(t: Tensor3, axis: int) -> Tensor3:
    # index negation modulo the axis length: k -> (N - k) mod N
    return np.roll(np.flip(t, axis=axis), 1, axis=axis)


def _reflection_sum(t: Tensor3, axes: tuple[int, int, int]) -> Tensor3:
    a1, a2, a3 = axes
    total = _reflect(t, a1) + _reflect(t, a2) + _reflect(t, a3)
    return total - _reflect(_reflect(_reflect(t, a1), a2), a3)


def _half_of(t: Tensor3):
    return Fraction(1, 2) if t.dtype == object else 0.5


def sdht_to_dht(ys: Tensor3) -> Tensor3:
    """Combine four index-reflected SDHT tensors into the 3D DHT tensor.

    Self-inverse: applying it twice returns the input, which is why the
    identical step appears in both the forward and inverse pipelines.
    """
    ys = np.asarray(ys)
    return _reflection_sum(ys, (0, 1, 2)) * _half_of(ys)


def _wants_rational(t: np.ndarray) -> bool:
    return t.dtype == object or np.issubdtype(t.dtype, np.integer)


def forward_matrix(spec: TransformSpec, rational: bool = False) -> np.ndarray:
    if spec.kind == "approx":
        return rational_candidate(spec.m) if rational else float_candidate(spec.m)
    if spec.kind == "dht":
        return exact_dht_matrix(8)
    return exact_dct_matrix(8)


def inverse_parts(spec: TransformSpec, rational: bool = False):
    """(inverse-side matrix, per-axis diagonal correction) for one mode.

    The diagonal entries are those of the inverted direct/inverse product,
    so the pair multiplies to the identity exactly whenever that product
    is diagonal (exact kinds, and the beta product 1 * 2 = 2 pair).
    """
    if spec.kind == "dht":
        h = exact_dht_matrix(8)
        return h, tuple([1.0 / 8.0] * 8)
    if spec.kind == "dct":
        return exact_dct_matrix(8).T, tuple([1.0] * 8)
    direct = rational_candidate(spec.m) if rational else float_candidate(spec.m)
    if spec.inverse_policy == "involutional":
        return direct, diagonal_correction(direct).diag
    if spec.inverse_policy == "paired":
        partner = rational_candidate(spec.q) if rational else float_candidate(spec.q)
        return partner, gram_inverse_diagonal(direct @ partner).diag
    inv = matrix_inverse(rational_candidate(spec.m))
    one = Fraction(1) if rational else 1.0
    return (inv if rational else inv.astype(float)), tuple([one] * 8)


def correction_tensor(spec: TransformSpec, rational: bool = False,
                      fold_half: bool = False) -> Tensor3:
    """Outer product of the three per-axis diagonal corrections.

    With fold_half the single 1/2 of the reflection combination is merged
    in as well, so the remaining inverse is products plus a plain sum.
    """
    _, diag = inverse_parts(spec, rational)
    d = np.array(diag, dtype=object if rational else float)
    out = d[:, None, None] * d[None, :, None] * d[None, None, :]
    if fold_half:
        out = out * (Fraction(1, 2) if rational else 0.5)
    return out


def _check_approx_dims(t: np.ndarray, spec: TransformSpec) -> None:
    if spec.kind != "dht" and t.shape != (8, 8, 8):
        raise DimensionMismatch(
            f"{spec.label()} supports 8x8x8 blocks only, got {t.shape}"
        )


def dht3_forward(t: Tensor3, spec: TransformSpec) -> Tensor3:
    """3D Hartley transform of one block: separable pass, then combination."""
    t = np.asarray(t)
    if not spec.is_hartley:
        raise InvalidConfiguration("dht3_forward requires a Hartley kind")
    _check_approx_dims(t, spec)
    if spec.kind == "dht":
        mats = tuple(exact_dht_matrix(n) for n in t.shape)
        return sdht_to_dht(sdht3_forward(t.astype(float), mats))
    rational = _wants_rational(t)
    if rational and t.dtype != object:
        t = t.astype(object)
    return sdht_to_dht(sdht3_forward(t, forward_matrix(spec, rational)))


def dht3_inverse(y: Tensor3, spec: TransformSpec) -> Tensor3:
    """Invert dht3_forward: diagonal correction, inverse pass, combination."""
    y = np.asarray(y)
    if not spec.is_hartley:
        raise InvalidConfiguration("dht3_inverse requires a Hartley kind")
    _check_approx_dims(y, spec)
    if spec.kind == "dht":
        y = y.astype(float) / float(np.prod(y.shape))
        mats = tuple(exact_dht_matrix(n) for n in y.shape)
        return sdht_to_dht(sdht3_forward(y, mats))
    rational = _wants_rational(y)
    if rational and y.dtype != object:
        y = y.astype(object)
    matrix, _ = inverse_parts(spec, rational)
    scaled = y * correction_tensor(spec, rational)
    return sdht_to_dht(sdht3_forward(scaled, matrix))


def dct3_forward(t: Tensor3) -> Tensor3:
    """Separable orthonormal 3D DCT (no combination step)."""
    return sdht3_forward(np.asarray(t).astype(float), exact_dct_matrix(8))


def dct3_inverse(y: Tensor3) -> Tensor3:
    return sdht3_forward(np.asarray(y).astype(float), exact_dct_matrix(8).T)


def transform_forward(t: Tensor3, spec: TransformSpec) -> Tensor3:
    return dct3_forward(t) if spec.kind == "dct" else dht3_forward(t, spec)


def transform_inverse(y: Tensor3, spec: TransformSpec) -> Tensor3:
    return dct3_inverse(y) if spec.kind == "dct" else dht3_inverse(y, spec)


def row_column_execute(t: Tensor3, kernel) -> Tensor3:
    """Run a 1D kernel over all three modes via transform + transpose.

    Each round pushes the 64 mode-1 fibers through the kernel at once (the
    kernel receives eight 8x8 planes and operates on them elementwise),
    then materializes the cyclic transpose that brings the next mode to
    the front.  Three rounds restore the original layout, and the result
    equals sdht3_forward with the kernel's matrix.
    """
    out = np.asarray(t)
    if out.shape != (8, 8, 8):
        raise DimensionMismatch(f"expected an 8x8x8 block, got {out.shape}")
    for _ in range(3):
        planes = kernel([out[i] for i in range(8)])
        out = np.ascontiguousarray(np.transpose(np.stack(planes), (1, 2, 0)))
    return out


# --- batched block pipelines (float64) ------------------------------------

def batch_forward(blocks: np.ndarray, spec: TransformSpec) -> np.ndarray:
    """Forward-transform a (B, 8, 8, 8) stack of blocks in one shot.

    Dyadic matrix entries times integer-valued samples stay exactly
    representable in float64, so this fast path loses nothing for approx
    kinds on integer input.
    """
    blocks = np.asarray(blocks, dtype=float)
    if blocks.ndim != 4 or blocks.shape[1:] != (8, 8, 8):
        raise DimensionMismatch(f"expected (B, 8, 8, 8), got {blocks.shape}")
    h = np.asarray(forward_matrix(spec), dtype=float)
    ys = np.einsum("ai,bj,ck,nijk->nabc", h, h, h, blocks, optimize=True)
    if spec.kind == "dct":
        return ys
    return _reflection_sum(ys, (1, 2, 3)) * 0.5


def batch_inverse(coeffs: np.ndarray, spec: TransformSpec) -> np.ndarray:
    """Invert batch_forward on a (B, 8, 8, 8) coefficient stack."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 4 or coeffs.shape[1:] != (8, 8, 8):
        raise DimensionMismatch(f"expected (B, 8, 8, 8), got {coeffs.shape}")
    if spec.kind == "dct":
        c = exact_dct_matrix(8)
        return np.einsum("ai,bj,ck,nijk->nabc", c.T, c.T, c.T, coeffs, optimize=True)
    if spec.kind == "dht":
        matrix = exact_dht_matrix(8)
        scale = np.full((8, 8, 8), 1.0 / 1024.0)
    else:
        matrix, _ = inverse_parts(spec)
        scale = correction_tensor(spec, fold_half=True).astype(float)
    a = np.asarray(matrix, dtype=float)
    xs = np.einsum(
        "ai,bj,ck,nijk->nabc", a, a, a, coeffs * scale[None], optimize=True
    )
    return _reflection_sum(xs, (1, 2, 3))
