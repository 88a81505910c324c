"""Reconstruction quality: PSNR and slice-wise SSIM for 3D volumes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import convolve2d

from .errors import DimensionMismatch, LengthMismatch, SliceTooSmall

#: SSIM window and stability constants from the standard formulation
_WINDOW_SIZE = 11
_WINDOW_SIGMA = 1.5
_K1 = 0.01
_K2 = 0.03


def _check_same_dims(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"volume shapes differ: {a.shape} vs {b.shape}")
    if a.ndim != 3:
        raise DimensionMismatch(f"expected third-order tensors, got ndim={a.ndim}")


def psnr(a, b, bit_depth: int = 8) -> float:
    """10*log10(peak^2 / MSE) with peak = 2**bit_depth - 1; inf when equal."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_dims(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    peak = float(2**bit_depth - 1)
    return 10.0 * math.log10(peak * peak / mse)


def _gaussian_window() -> np.ndarray:
    half = (_WINDOW_SIZE - 1) / 2.0
    g = np.exp(-((np.arange(_WINDOW_SIZE) - half) ** 2) / (2.0 * _WINDOW_SIGMA**2))
    w = np.outer(g, g)
    return w / w.sum()


def _ssim_slice(x: np.ndarray, y: np.ndarray, peak: float) -> float:
    win = _gaussian_window()
    c1 = (_K1 * peak) ** 2
    c2 = (_K2 * peak) ** 2
    mu_x = convolve2d(x, win, mode="valid")
    mu_y = convolve2d(y, win, mode="valid")
    var_x = convolve2d(x * x, win, mode="valid") - mu_x * mu_x
    var_y = convolve2d(y * y, win, mode="valid") - mu_y * mu_y
    cov = convolve2d(x * y, win, mode="valid") - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))


def ssim_slices(a, b, bit_depth: int = 8) -> tuple[float, ...]:
    """SSIM of every axis-3 slice (the in-slice axes are the first two)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_dims(a, b)
    n1, n2, n3 = a.shape
    if n1 < _WINDOW_SIZE or n2 < _WINDOW_SIZE:
        raise SliceTooSmall(
            f"slices are {n1}x{n2}; SSIM needs at least "
            f"{_WINDOW_SIZE}x{_WINDOW_SIZE}"
        )
    peak = float(2**bit_depth - 1)
    return tuple(_ssim_slice(a[:, :, k], b[:, :, k], peak) for k in range(n3))


def ssim(a, b, bit_depth: int = 8) -> float:
    """Mean slice-wise SSIM over the third axis."""
    values = ssim_slices(a, b, bit_depth)
    return sum(values) / len(values)


@dataclass(frozen=True)
class QualityReport:
    """PSNR/SSIM of one reconstruction, with its aggregation weight."""

    psnr_db: float
    ssim: float
    per_slice_ssim: tuple[float, ...] = field(default=())
    weight: int = 1


def quality_report(original, reconstruction, bit_depth: int = 8,
                   weight: int = 1) -> QualityReport:
    slices = ssim_slices(original, reconstruction, bit_depth)
    return QualityReport(
        psnr_db=psnr(original, reconstruction, bit_depth),
        ssim=sum(slices) / len(slices),
        per_slice_ssim=slices,
        weight=weight,
    )


def aggregate(reports: list[QualityReport],
              block_counts: list[int] | None = None) -> QualityReport:
    """Block-count-weighted mean of PSNR (in dB) and SSIM across volumes."""
    weights = block_counts if block_counts is not None else [r.weight for r in reports]
    if len(reports) != len(weights):
        raise LengthMismatch(
            f"{len(reports)} reports but {len(weights)} block counts"
        )
    total = float(sum(weights))
    if total <= 0.0:
        raise LengthMismatch("total aggregation weight must be positive")
    psnr_db = sum(w * r.psnr_db for r, w in zip(reports, weights)) / total
    mean_ssim = sum(w * r.ssim for r, w in zip(reports, weights)) / total
    return QualityReport(psnr_db=psnr_db, ssim=mean_ssim, weight=int(total))
