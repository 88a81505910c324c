"""Raw volume files, CSV/plot emission, and synthetic test volumes.

A volume on disk is a headerless little-endian sample array (axis 3
fastest-varying) next to a small text sidecar holding the metadata:

    dims: 64 64 64
    bit_depth: 8
    sample_format: uint

sample_format "float64" stores doubles instead of unsigned integers and
exists so transform-domain tensors can round-trip through the same files.
All writers go through a temp-file-and-rename step, so a failed run never
leaves a partial artifact behind.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .errors import DimensionMismatch, LengthMismatch, MalformedSidecar

_SAMPLE_DTYPES = {
    (8, "uint"): "<u1",
    (16, "uint"): "<u2",
    (8, "float64"): "<f8",
    (16, "float64"): "<f8",
}


@dataclass(frozen=True)
class VolumeHeader:
    dims: tuple[int, int, int]
    bit_depth: int
    sample_format: str = "uint"

    def __post_init__(self) -> None:
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise MalformedSidecar(f"dims must be three positive integers: {self.dims}")
        if self.bit_depth not in (8, 16):
            raise MalformedSidecar(f"bit_depth must be 8 or 16, got {self.bit_depth}")
        if self.sample_format not in ("uint", "float64"):
            raise MalformedSidecar(f"unknown sample_format {self.sample_format!r}")

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(_SAMPLE_DTYPES[(self.bit_depth, self.sample_format)])

    def payload_bytes(self) -> int:
        return int(np.prod(self.dims)) * self.dtype.itemsize


def sidecar_path(path) -> Path:
    return Path(str(path) + ".meta")


def _parse_sidecar(text: str, source: str) -> VolumeHeader:
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise MalformedSidecar(f"{source}: expected 'key: value', got {raw!r}")
        key, value = (part.strip() for part in line.split(":", 1))
        if key not in ("dims", "bit_depth", "sample_format"):
            raise MalformedSidecar(f"{source}: unknown key {key!r}")
        if key in fields:
            raise MalformedSidecar(f"{source}: duplicate key {key!r}")
        fields[key] = value
    for required in ("dims", "bit_depth"):
        if required not in fields:
            raise MalformedSidecar(f"{source}: missing key {required!r}")
    try:
        dims = tuple(int(tok) for tok in fields["dims"].split())
        depth = int(fields["bit_depth"])
    except ValueError as exc:
        raise MalformedSidecar(f"{source}: {exc}") from None
    return VolumeHeader(dims, depth, fields.get("sample_format", "uint"))


def read_header(path) -> VolumeHeader:
    meta = sidecar_path(path)
    if not meta.exists():
        raise MalformedSidecar(f"missing sidecar {meta}")
    return _parse_sidecar(meta.read_text(), str(meta))


def read_volume(path, header: VolumeHeader | None = None) -> np.ndarray:
    """Load a raw volume; metadata comes from the sidecar unless passed in."""
    header = header if header is not None else read_header(path)
    payload = Path(path).read_bytes()
    expected = header.payload_bytes()
    if len(payload) != expected:
        raise LengthMismatch(
            f"{path}: payload is {len(payload)} bytes, dims {header.dims} at "
            f"{header.bit_depth}-bit need {expected}"
        )
    data = np.frombuffer(payload, dtype=header.dtype).reshape(header.dims)
    return data.copy()


def write_bytes(path, payload: bytes) -> None:
    """Atomic write: temp file beside the target, then rename."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_volume(path, volume: np.ndarray, bit_depth: int | None = None) -> VolumeHeader:
    """Write samples + sidecar; floats go out as float64, ints as uint8/16."""
    volume = np.asarray(volume)
    if volume.ndim != 3:
        raise DimensionMismatch(f"expected a third-order tensor, got ndim={volume.ndim}")
    if np.issubdtype(volume.dtype, np.floating):
        depth = bit_depth if bit_depth is not None else 8
        header = VolumeHeader(volume.shape, depth, "float64")
        payload = np.ascontiguousarray(volume, dtype="<f8")
    else:
        if bit_depth is None:
            bit_depth = 16 if volume.max(initial=0) > 255 else 8
        peak = 2**bit_depth - 1
        if volume.min(initial=0) < 0 or volume.max(initial=0) > peak:
            raise ValueError(f"samples outside [0, {peak}] for {bit_depth}-bit output")
        header = VolumeHeader(volume.shape, bit_depth, "uint")
        payload = np.ascontiguousarray(volume, dtype=header.dtype)
    write_bytes(path, payload.tobytes())
    meta = "dims: {} {} {}\nbit_depth: {}\nsample_format: {}\n".format(
        *header.dims, header.bit_depth, header.sample_format
    )
    write_bytes(sidecar_path(path), meta.encode())
    return header


def write_csv(path, fieldnames, rows) -> None:
    """Header + rows, dot-decimal, written atomically."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        dir=target.parent or Path("."), prefix=target.name, text=True
    )
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(fieldnames)
            for row in rows:
                writer.writerow(row)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_plot(path, points) -> bool:
    """Rate-distortion figure: PSNR and SSIM panels against bitrate.

    points are (method, bpv, psnr_db, ssim) tuples; returns False (and
    writes nothing) when there is no data to plot.
    """
    points = list(points)
    if not points:
        return False
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series: dict[str, list[tuple[float, float, float]]] = {}
    for method, bpv, psnr_db, ssim_value in points:
        series.setdefault(str(method), []).append(
            (float(bpv), float(psnr_db), float(ssim_value))
        )
    fig, (ax_psnr, ax_ssim) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 7.5))
    for method, values in series.items():
        values.sort()
        bpv = [v[0] for v in values]
        ax_psnr.plot(bpv, [v[1] for v in values], marker="o", label=method)
        ax_ssim.plot(bpv, [v[2] for v in values], marker="o", label=method)
    ax_psnr.set_ylabel("PSNR (dB)")
    ax_ssim.set_ylabel("SSIM")
    ax_ssim.set_xlabel("bitrate (bpv)")
    for ax in (ax_psnr, ax_ssim):
        ax.grid(True, alpha=0.3)
    ax_psnr.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    target = Path(path)
    tmp = target.with_name(target.name + ".tmp" + target.suffix)
    try:
        fig.savefig(tmp, format=target.suffix.lstrip(".") or "svg")
        os.replace(tmp, target)
    finally:
        plt.close(fig)
        if tmp.exists():
            tmp.unlink()
    return True


# --- synthetic volumes ----------------------------------------------------

def _ar1_field(rng: np.random.Generator, shape, rho: float,
               axes) -> np.ndarray:
    noise = rng.standard_normal(shape)
    b = [math.sqrt(1.0 - rho * rho)]
    a = [1.0, -rho]
    for axis in axes:
        noise = lfilter(b, a, noise, axis=axis)
    return noise


def _to_samples(field: np.ndarray, bit_depth: int) -> np.ndarray:
    peak = 2**bit_depth - 1
    lo = float(field.min())
    hi = float(field.max())
    scale = (hi - lo) or 1.0
    mapped = (field - lo) * (peak / scale)
    return np.rint(mapped).astype(np.uint8 if bit_depth == 8 else np.uint16)


def synthesize_ar1_volume(dims=(64, 64, 64), rho: float = 0.95,
                          bit_depth: int = 8, seed: int = 0) -> np.ndarray:
    """Separable first-order autoregressive volume stretched to full range.

    Deterministic for a given seed; the same signal model the search
    metrics assume, so trained orderings and sweeps are self-consistent.
    """
    rng = np.random.default_rng(seed)
    field = _ar1_field(rng, tuple(dims), rho, axes=(0, 1, 2))
    return _to_samples(field, bit_depth)


def synthesize_ar1_blocks(count: int, rho: float = 0.95, bit_depth: int = 8,
                          seed: int = 0) -> np.ndarray:
    """(count, 8, 8, 8) stack of independent AR(1) blocks."""
    if count < 1:
        raise ValueError(f"block count must be positive, got {count}")
    rng = np.random.default_rng(seed)
    field = _ar1_field(rng, (count, 8, 8, 8), rho, axes=(1, 2, 3))
    return _to_samples(field, bit_depth)
