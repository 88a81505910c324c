"""8-point Hartley kernels: exact, parametric, factorized, plus a DCT baseline.

The 8-point Hartley matrix H has entries cas(2*pi*k*n/8) with
cas(x) = cos(x) + sin(x).  Writing alpha for the +-1 entries and beta for
the +-sqrt(2) entries gives a parametric matrix H(alpha, beta) that stays
invertible for any beta != 0, so replacing beta by a dyadic rational m/8
yields a multiplierless approximation with the same sparsity pattern and,
crucially, the same five-factor fast algorithm

    H(alpha, beta) = A3 @ A2 @ M(alpha, beta) @ A1 @ P

with 22 additions in A1/A2/A3 and two multiplications by beta in M.

All approximate-matrix arithmetic is exact: matrices are built over
Fraction entries when beta is rational, so involution and inverse-pair
identities hold as equalities, not approximations.  Only the exact kernels
(beta = sqrt(2), and the DCT) use floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from .dyadic import CsdForm, DyadicRational, add_shift_cost, csd_encode
from .errors import NonInvertibleGram, SingularParameter

#: sentinel for the exact parameter beta = sqrt(2)
SQRT2 = math.sqrt(2.0)

#: candidate grid: beta_m = m/8 for m = 1..24
CANDIDATE_MS = tuple(range(1, 25))

#: input permutation of the first factorization stage
PERMUTATION = (0, 4, 2, 6, 1, 5, 3, 7)


def candidate_beta(m: int) -> DyadicRational:
    if m not in CANDIDATE_MS:
        raise ValueError(f"candidate index m must be in 1..24, got {m}")
    return DyadicRational(m, 3)


@dataclass(frozen=True)
class OpCount:
    """(multiplications, additions, bit-shifts) cost triple."""

    multiplications: int
    additions: int
    shifts: int

    def __post_init__(self) -> None:
        if min(self.multiplications, self.additions, self.shifts) < 0:
            raise ValueError("operation counts must be nonnegative")

    def __add__(self, other: "OpCount") -> "OpCount":
        return OpCount(
            self.multiplications + other.multiplications,
            self.additions + other.additions,
            self.shifts + other.shifts,
        )

    def scaled(self, k: int) -> "OpCount":
        return OpCount(k * self.multiplications, k * self.additions, k * self.shifts)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.multiplications, self.additions, self.shifts)


@dataclass(frozen=True)
class ParametricHartleyMatrix:
    """The 8x8 parametric Hartley matrix with its generating parameters."""

    alpha: Any
    beta: Any
    entries: np.ndarray


@dataclass(frozen=True)
class FactorizationStages:
    """The five printed factors whose product is H(alpha, beta)."""

    P: np.ndarray
    A1: np.ndarray
    M: np.ndarray
    A2: np.ndarray
    A3: np.ndarray
    beta: Any

    def product(self) -> np.ndarray:
        return self.A3 @ self.A2 @ self.M @ self.A1 @ self.P


def cas(x):
    """cos(x) + sin(x), elementwise."""
    return np.cos(x) + np.sin(x)


def exact_dht_matrix(n: int) -> np.ndarray:
    """N-point Hartley matrix, entry [k][m] = cas(2*pi*k*m/N)."""
    if n < 1:
        raise ValueError(f"transform length must be positive, got {n}")
    k = np.arange(n)
    return cas(2.0 * np.pi * np.outer(k, k) / n)


def _beta_scalar(beta):
    """Normalize a beta argument to a Fraction (dyadic path) or float."""
    if isinstance(beta, DyadicRational):
        return beta.value
    if isinstance(beta, (Fraction, int)):
        return Fraction(beta)
    return float(beta)


def _alpha_like(beta_scalar):
    return Fraction(1) if isinstance(beta_scalar, Fraction) else 1.0


def build_parametric(beta) -> ParametricHartleyMatrix:
    """H(1, beta) laid out with alpha on the even-structure and beta on the
    four +-beta positions; rejects beta = 0, which is singular."""
    b = _beta_scalar(beta)
    if b == 0:
        raise SingularParameter("beta = 0 produces a singular matrix")
    a = _alpha_like(b)
    z = 0 * a
    rows = [
        [a, a, a, a, a, a, a, a],
        [a, b, a, z, -a, -b, -a, z],
        [a, a, -a, -a, a, a, -a, -a],
        [a, z, -a, b, -a, z, a, -b],
        [a, -a, a, -a, a, -a, a, -a],
        [a, -b, a, z, -a, b, -a, z],
        [a, -a, -a, a, a, -a, -a, a],
        [a, z, -a, -b, -a, z, a, b],
    ]
    dtype = object if isinstance(b, Fraction) else float
    return ParametricHartleyMatrix(a, b, np.array(rows, dtype=dtype))


def build_stages(beta) -> FactorizationStages:
    """The five-factor decomposition; its product equals build_parametric."""
    b = _beta_scalar(beta)
    if b == 0:
        raise SingularParameter("beta = 0 produces a singular matrix")
    a = _alpha_like(b)
    one, zero = 1 * a, 0 * a
    dtype = object if isinstance(b, Fraction) else float

    def mat(rows):
        return np.array(rows, dtype=dtype)

    P = mat([[one if c == p else zero for c in range(8)] for p in PERMUTATION])
    B = [[one, one], [one, -one]]
    A1 = mat(
        [
            [B[r % 2][c % 2] if r // 2 == c // 2 else zero for c in range(8)]
            for r in range(8)
        ]
    )
    M = mat(
        [
            [(b if r in (5, 7) else a) if r == c else zero for c in range(8)]
            for r in range(8)
        ]
    )
    a2a = [[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, -1, 0], [0, 1, 0, -1]]
    a2b = [[1, 0, 1, 0], [0, 1, 0, 0], [1, 0, -1, 0], [0, 0, 0, 1]]
    A2 = mat(
        [
            [
                (a2a if r < 4 else a2b)[r % 4][c % 4] * one if r // 4 == c // 4 else zero
                for c in range(8)
            ]
            for r in range(8)
        ]
    )
    A3 = mat(
        [
            [
                (one if c % 4 == r % 4 else zero) * (-1 if r >= 4 and c >= 4 else 1)
                if (c % 4 == r % 4)
                else zero
                for c in range(8)
            ]
            for r in range(8)
        ]
    )
    return FactorizationStages(P, A1, M, A2, A3, b)


def scale_pow2(v, e: int):
    """v * 2**e for plain numbers; instrumented scalars hook this method."""
    if e == 0:
        return v
    hook = getattr(v, "scale_pow2", None)
    if hook is not None:
        return hook(e)
    if isinstance(v, np.ndarray):
        if v.dtype == object:
            return v * (Fraction(1 << e) if e > 0 else Fraction(1, 1 << -e))
        return v * 2.0**e
    if isinstance(v, Fraction):
        return v * (Fraction(1 << e) if e > 0 else Fraction(1, 1 << -e))
    if isinstance(v, int):
        return v << e if e > 0 else Fraction(v, 1 << -e)
    return v * 2.0**e


def _mul_dyadic(v, digits: CsdForm):
    """Multiply v by the dyadic rational encoded in digits via shift-adds."""
    total = None
    for sign, e in digits.digits:
        term = scale_pow2(v, e)
        if total is None:
            total = term if sign > 0 else -term
        else:
            total = total + term if sign > 0 else total - term
    if total is None:
        return 0 * v
    return total


def fast_apply(x: Sequence, beta) -> list:
    """Apply the five-stage fast algorithm to a length-8 sequence.

    Multiplication by a dyadic beta is expanded into shift-adds; passing
    beta = SQRT2 (or any float) multiplies directly.  Elements may be ints,
    Fractions, floats, numpy arrays, or instrumented scalars; stage
    arithmetic uses only +, -, and scale_pow2, so operation-counting
    wrappers see exactly the cost the analytical model predicts.
    """
    if len(x) != 8:
        raise ValueError("fast_apply expects a length-8 input")
    b = _beta_scalar(beta)
    if b == 0:
        raise SingularParameter("beta = 0 produces a singular matrix")
    if isinstance(b, Fraction):
        digits = csd_encode(DyadicRational.from_fraction(b))
        mul_beta = lambda v: _mul_dyadic(v, digits)  # noqa: E731
    else:
        mul_beta = lambda v: v * b  # noqa: E731

    s = [x[p] for p in PERMUTATION]
    # A1: four 2-point butterflies, 8 additions
    t = [
        s[0] + s[1], s[0] - s[1],
        s[2] + s[3], s[2] - s[3],
        s[4] + s[5], s[4] - s[5],
        s[6] + s[7], s[6] - s[7],
    ]
    # M: two multiplications by beta (alpha = 1 is free)
    t[5] = mul_beta(t[5])
    t[7] = mul_beta(t[7])
    # A2: 4 + 2 additions
    u = [
        t[0] + t[2], t[1] + t[3],
        t[0] - t[2], t[1] - t[3],
        t[4] + t[6], t[5],
        t[4] - t[6], t[7],
    ]
    # A3: eight 2-point butterflies across halves, 8 additions
    return [
        u[0] + u[4], u[1] + u[5], u[2] + u[6], u[3] + u[7],
        u[0] - u[4], u[1] - u[5], u[2] - u[6], u[3] - u[7],
    ]


def count_1d(beta) -> OpCount:
    """Arithmetic cost of one 8-point transform via the fast algorithm."""
    b = _beta_scalar(beta)
    if b == 0:
        raise SingularParameter("beta = 0 produces a singular matrix")
    if isinstance(b, Fraction):
        adds, shifts = add_shift_cost(DyadicRational.from_fraction(b))
        return OpCount(0, 22 + 2 * adds, 2 * shifts)
    return OpCount(2, 22, 0)


def count_dct_1d() -> OpCount:
    """Cost of the 8-point scaled-output DCT factorization used here."""
    return OpCount(11, 29, 0)


# --- diagonal correction -------------------------------------------------

@dataclass(frozen=True)
class DiagonalCorrection:
    """Diagonal of (T @ T.T)**-1, used to undo non-unit row norms."""

    diag: tuple


def _fraction_inverse(m: np.ndarray) -> np.ndarray:
    """Exact inverse of a square object-array of Fractions (Gauss-Jordan)."""
    n = m.shape[0]
    a = [[Fraction(m[i, j]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise NonInvertibleGram("matrix is singular over the rationals")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        inv[col] = [v / p for v in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
    return np.array(inv, dtype=object)


def matrix_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse that is exact for Fraction matrices, float otherwise."""
    if m.dtype == object:
        return _fraction_inverse(m)
    try:
        return np.linalg.inv(m)
    except np.linalg.LinAlgError as exc:
        raise NonInvertibleGram(str(exc)) from None


def gram_inverse_diagonal(product: np.ndarray) -> DiagonalCorrection:
    """diag(G**-1) for a (near-)diagonal direct/inverse product G."""
    inv = matrix_inverse(product)
    return DiagonalCorrection(tuple(inv[i, i] for i in range(inv.shape[0])))


def diagonal_correction(matrix: np.ndarray) -> DiagonalCorrection:
    """D = diag((T @ T.T)**-1) for a transform matrix T."""
    if any((row == 0).all() for row in matrix):
        raise NonInvertibleGram("matrix has a zero row")
    return gram_inverse_diagonal(matrix @ matrix.T)


# --- cached candidate matrices ------------------------------------------

@lru_cache(maxsize=None)
def rational_candidate(m: int) -> np.ndarray:
    """Fraction-valued Hartley approximation for beta = m/8."""
    return build_parametric(candidate_beta(m)).entries


@lru_cache(maxsize=None)
def float_candidate(m: int) -> np.ndarray:
    return rational_candidate(m).astype(float)


# --- 8-point DCT baseline ------------------------------------------------

@lru_cache(maxsize=None)
def exact_dct_matrix(n: int = 8) -> np.ndarray:
    """Orthonormal DCT-II matrix (C @ C.T = I)."""
    if n < 1:
        raise ValueError(f"transform length must be positive, got {n}")
    k = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    c = np.cos(np.pi * (2 * m + 1) * k / (2 * n))
    c[0] *= math.sqrt(1.0 / n)
    c[1:] *= math.sqrt(2.0 / n)
    return c


#: the scaled DCT below outputs sqrt(8) times the orthonormal DCT-II
DCT_OUTPUT_SCALE = math.sqrt(8.0)

_C3 = math.cos(3.0 * math.pi / 16.0)
_S3 = math.sin(3.0 * math.pi / 16.0)
_C1 = math.cos(math.pi / 16.0)
_S1 = math.sin(math.pi / 16.0)
_R2C6 = SQRT2 * math.cos(6.0 * math.pi / 16.0)
_R2S6 = SQRT2 * math.sin(6.0 * math.pi / 16.0)


def _rotate(a, b, c, s):
    # 3 multiplications, 3 additions for the pair (c*a + s*b, c*b - s*a)
    t = (a + b) * c
    return t + b * (s - c), t - a * (s + c)


def dct_fast_apply(x: Sequence) -> list:
    """8-point DCT with uniformly scaled output (sqrt(8) x orthonormal).

    11 multiplications and 29 additions; the minimum multiplicative cost
    for an 8-point DCT.  Works on any scalar type supporting + - *.
    """
    if len(x) != 8:
        raise ValueError("dct_fast_apply expects a length-8 input")
    b0, b1, b2, b3 = x[0] + x[7], x[1] + x[6], x[2] + x[5], x[3] + x[4]
    b4, b5, b6, b7 = x[3] - x[4], x[2] - x[5], x[1] - x[6], x[0] - x[7]
    c0, c1 = b0 + b3, b1 + b2
    c2, c3 = b1 - b2, b0 - b3
    c4, c7 = _rotate(b4, b7, _C3, _S3)
    c5, c6 = _rotate(b5, b6, _C1, _S1)
    y0, y4 = c0 + c1, c0 - c1
    y2, y6 = _rotate(c2, c3, _R2C6, _R2S6)
    d4, d5 = c4 + c6, c7 - c5
    d6, d7 = c4 - c6, c7 + c5
    y1, y7 = d7 + d4, d7 - d4
    y3, y5 = d5 * SQRT2, d6 * SQRT2
    return [y0, y1, y2, y3, y4, y5, y6, y7]
