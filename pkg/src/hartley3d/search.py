"""Exhaustive sweep of the dyadic parameter grid and its figures of merit.

Candidates are Hartley approximations H(1, m/8) for m = 1..24.  Each is
scored under a first-order autoregressive signal model (correlation rho,
default 0.95) by:

* deviation from diagonality of the direct/inverse product, which
  measures how close the product is to a perfectly invertible diagonal;
* mean squared kernel error against the exact 8-point Hartley matrix;
* unified transform coding gain in dB, valid for non-orthogonal matrices;
* the shift-add cost of the fast algorithm.

Products of candidate matrices are evaluated in exact rational
arithmetic, so "the product is diagonal" is decided exactly, never by a
floating-point threshold.  The grid contains exactly one reciprocal pair
with a diagonal product: m = 8 with m = 16 (beta product 1 * 2 = 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .dyadic import DyadicRational
from .errors import NonInvertibleGram
from .kernels import (
    CANDIDATE_MS,
    OpCount,
    candidate_beta,
    count_1d,
    exact_dht_matrix,
    matrix_inverse,
    rational_candidate,
)


@dataclass(frozen=True)
class MetricConfig:
    """Signal model behind the MSE and coding-gain figures."""

    rho: float = 0.95
    n: int = 8

    def __post_init__(self) -> None:
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")

    def correlation_matrix(self) -> np.ndarray:
        idx = np.arange(self.n)
        return self.rho ** np.abs(idx[:, None] - idx[None, :])


@dataclass(frozen=True)
class CandidateReport:
    m: int
    beta: DyadicRational
    delta_self: float
    mse: float
    coding_gain_db: float
    op_count: OpCount
    best_inverse_m: int
    delta_pair: float


def _diagonality_ratio_exact(matrix: np.ndarray) -> Fraction:
    """sum(diag**2) / sum(all**2) as an exact Fraction (object arrays)."""
    diag_sq = Fraction(0)
    total_sq = Fraction(0)
    n = matrix.shape[0]
    for i in range(n):
        for j in range(n):
            v = Fraction(matrix[i, j])
            total_sq += v * v
            if i == j:
                diag_sq += v * v
    if total_sq == 0:
        raise ValueError("deviation from diagonality is undefined for the zero matrix")
    return diag_sq / total_sq


def deviation_from_diagonality(matrix: np.ndarray) -> float:
    """1 - ||diag(M)||_F / ||M||_F; zero exactly when M is diagonal.

    Rational (object dtype) inputs are measured exactly: the result is
    0.0 precisely when every off-diagonal entry is zero.
    """
    if matrix.dtype == object:
        ratio = _diagonality_ratio_exact(matrix)
        if ratio == 1:
            return 0.0
        return 1.0 - math.sqrt(ratio)
    total_sq = float(np.sum(matrix * matrix))
    if total_sq == 0.0:
        raise ValueError("deviation from diagonality is undefined for the zero matrix")
    diag_sq = float(np.sum(np.diagonal(matrix) ** 2))
    if diag_sq == total_sq:
        return 0.0
    return 1.0 - math.sqrt(diag_sq / total_sq)


def mse_vs_exact(candidate: np.ndarray, config: MetricConfig = MetricConfig()) -> float:
    """Mean squared kernel error against the exact Hartley matrix.

    For an autoregressive input x with correlation matrix R, the expected
    squared error per output sample of using T^ in place of the exact
    kernel H is trace((H - T^) R (H - T^)^T) / n; the matrices enter
    unnormalized, exactly as they multiply the signal.
    """
    t = candidate.astype(float) if candidate.dtype == object else candidate
    h = exact_dht_matrix(config.n)
    if t.shape != h.shape:
        raise ValueError(f"candidate must be {h.shape}, got {t.shape}")
    e = h - t
    r = config.correlation_matrix()
    return float(np.trace(e @ r @ e.T)) / config.n


def coding_gain_db(candidate: np.ndarray, config: MetricConfig = MetricConfig()) -> float:
    """Unified coding gain (dB) for a possibly non-orthogonal transform.

    Cg = -(10/n) * sum_i log10(A_i * B_i) with A_i the transform-domain
    variances diag(T R T^T) and B_i the squared norms of the synthesis
    (inverse-transform) columns.
    """
    t = candidate.astype(float) if candidate.dtype == object else candidate
    r = config.correlation_matrix()
    a = np.diagonal(t @ r @ t.T)
    try:
        inv = np.linalg.inv(t)
    except np.linalg.LinAlgError as exc:
        raise NonInvertibleGram(str(exc)) from None
    b = np.sum(inv * inv, axis=0)
    return -(10.0 / config.n) * float(np.sum(np.log10(a * b)))


@lru_cache(maxsize=None)
def _pair_ratio(m: int, q: int) -> Fraction:
    """Exact diagonality ratio of H^(m/8) @ H^(q/8)."""
    product = rational_candidate(m) @ rational_candidate(q)
    return _diagonality_ratio_exact(product)


def pair_deviation(m: int, q: int) -> float:
    """Deviation from diagonality of the (direct m, inverse q) product."""
    ratio = _pair_ratio(m, q)
    return 0.0 if ratio == 1 else 1.0 - math.sqrt(ratio)


def best_inverse(m: int) -> int:
    """The grid index q whose product with m is closest to diagonal.

    Exact ratios are compared; ties break toward the lower-cost candidate,
    then toward lower q.
    """
    def key(q: int):
        cost = count_1d(candidate_beta(q))
        return (-_pair_ratio(m, q), cost.additions, cost.shifts, q)

    return min(CANDIDATE_MS, key=key)


def sweep(config: MetricConfig = MetricConfig()) -> list[CandidateReport]:
    """Score all 24 candidates and choose each one's best quasi-inverse."""
    reports = []
    for m in CANDIDATE_MS:
        beta = candidate_beta(m)
        matrix = rational_candidate(m)
        q = best_inverse(m)
        reports.append(
            CandidateReport(
                m=m,
                beta=beta,
                delta_self=pair_deviation(m, m),
                mse=mse_vs_exact(matrix, config),
                coding_gain_db=coding_gain_db(matrix, config),
                op_count=count_1d(beta),
                best_inverse_m=q,
                delta_pair=pair_deviation(m, q),
            )
        )
    return reports


def lowest_cost_m(reports: list[CandidateReport] | None = None) -> int:
    """Candidate with minimal (additions, shifts), index as tiebreak."""
    reports = reports if reports is not None else sweep()
    return min(
        reports,
        key=lambda r: (r.op_count.additions, r.op_count.shifts, r.m),
    ).m


#: the four candidates singled out by the sweep: lowest cost (m=8, exact
#: inverse m=16), lowest MSE (m=11) and highest gain (m=12) which are each
#: other's best quasi-inverses, and m=16 as the exact inverse partner.
SELECTED_MS = (8, 11, 12, 16)

REPORT_COLUMNS = (
    "m", "beta", "delta_self", "mse", "cg_db",
    "mult", "add", "shift", "best_inverse_m", "delta_pair",
)


def report_rows(reports: list[CandidateReport]) -> list[list]:
    """Flatten reports into CSV-ready rows matching REPORT_COLUMNS."""
    rows = []
    for r in reports:
        rows.append([
            r.m, str(r.beta), f"{r.delta_self:.6e}", f"{r.mse:.6e}",
            f"{r.coding_gain_db:.4f}", r.op_count.multiplications,
            r.op_count.additions, r.op_count.shifts,
            r.best_inverse_m, f"{r.delta_pair:.6e}",
        ])
    return rows
