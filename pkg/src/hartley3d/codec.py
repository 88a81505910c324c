"""Fixed-bitrate volumetric codec over 8x8x8 transform blocks.

Coding: partition into blocks, 3D-transform each block, reorder the 512
coefficients by a zigzag priority permutation, keep the first L.  The
bitrate is L*b/512 bits per voxel for b-bit samples.  Decoding zero-fills
the discarded coefficients, inverts the transform under the configured
inverse policy, and reassembles.

There is no quantizer and no entropy coder; rate control is purely the
retained-coefficient count, so encoding once at L = 512 and truncating
reproduces every lower rate exactly.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigMismatch,
    DimensionMismatch,
    EmptyTrainingSet,
    InvalidConfiguration,
    NonIntegralRetention,
    StreamFormatError,
)
from .metrics import QualityReport, aggregate, quality_report
from .tensor3 import TransformSpec, batch_forward, batch_inverse
from .volume_io import synthesize_ar1_blocks

#: coefficients per block (8**3) and voxels per block
BLOCK_COEFFS = 512

#: the evaluation grid: [0.125, 7.125] bpv in steps of 0.5
DEFAULT_BITRATES = tuple(0.125 + 0.5 * i for i in range(15))


def _flat_coords(flat: int) -> tuple[int, int, int]:
    return (flat >> 6, (flat >> 3) & 7, flat & 7)


@dataclass(frozen=True)
class ZigzagOrder:
    """Rank -> flat-coefficient-index permutation; rank 0 is always DC."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(BLOCK_COEFFS)):
            raise InvalidConfiguration(
                "zigzag order must be a permutation of 0..511"
            )
        if self.order[0] != 0:
            raise InvalidConfiguration("zigzag rank 0 must be coefficient (0,0,0)")


def dct_zigzag() -> ZigzagOrder:
    """Diagonal-plane scan: ascending k1+k2+k3, then lexicographic."""
    order = []
    for s in range(22):
        for k1 in range(8):
            for k2 in range(8):
                k3 = s - k1 - k2
                if 0 <= k3 <= 7:
                    order.append((k1 << 6) | (k2 << 3) | k3)
    return ZigzagOrder(tuple(order))


def _training_blocks(training) -> np.ndarray:
    if isinstance(training, (list, tuple)):
        parts = [partition(np.asarray(v))[0] for v in training]
        return np.concatenate(parts, axis=0) if parts else np.empty((0, 8, 8, 8))
    training = np.asarray(training)
    if training.ndim == 3:
        return partition(training)[0]
    if training.ndim == 4 and training.shape[1:] == (8, 8, 8):
        return training
    raise DimensionMismatch(
        f"training data must be a volume, a list of volumes, or a "
        f"(B, 8, 8, 8) stack, got shape {training.shape}"
    )


def train_zigzag(transform: TransformSpec, training) -> ZigzagOrder:
    """Order coefficients by mean squared transform magnitude, descending.

    Ties break toward low k1+k2+k3, then lexicographic.  The DC term is
    pinned to rank 0 even if a pathological training set ranks it lower,
    keeping the ZigzagOrder invariant unconditional.
    """
    blocks = _training_blocks(training)
    if blocks.shape[0] == 0:
        raise EmptyTrainingSet("zigzag training needs at least one block")
    coeffs = batch_forward(blocks.astype(float), transform)
    energy = np.mean(coeffs.reshape(-1, BLOCK_COEFFS) ** 2, axis=0)
    order = sorted(
        range(BLOCK_COEFFS),
        key=lambda f: (-energy[f], sum(_flat_coords(f)), f),
    )
    if order[0] != 0:
        order.remove(0)
        order.insert(0, 0)
    return ZigzagOrder(tuple(order))


_TRAINED_CACHE: dict[tuple, ZigzagOrder] = {}


def default_zigzag(transform: TransformSpec, train_count: int = 4096,
                   rho: float = 0.95, seed: int = 2025) -> ZigzagOrder:
    """The ordering used when no training data is supplied.

    DCT keeps its conventional diagonal scan; Hartley kinds train on a
    seeded synthetic AR(1) block set.  Only the forward matrix matters,
    so all inverse policies of one m share a table.
    """
    if transform.kind == "dct":
        return dct_zigzag()
    key = (transform.kind, transform.m, train_count, rho, seed)
    if key not in _TRAINED_CACHE:
        forward_only = TransformSpec(transform.kind, transform.m)
        blocks = synthesize_ar1_blocks(train_count, rho=rho, seed=seed)
        _TRAINED_CACHE[key] = train_zigzag(forward_only, blocks)
    return _TRAINED_CACHE[key]


@dataclass(frozen=True)
class CodecConfig:
    transform: TransformSpec
    retained: int
    zigzag: ZigzagOrder
    bit_depth: int = 8

    def __post_init__(self) -> None:
        if not 1 <= self.retained <= BLOCK_COEFFS:
            raise InvalidConfiguration(
                f"retained coefficient count must be 1..512, got {self.retained}"
            )
        if self.bit_depth not in (8, 16):
            raise InvalidConfiguration(f"bit_depth must be 8 or 16, got {self.bit_depth}")
        t = self.transform
        if t.kind == "approx" and t.m == 8:
            # beta = 1 inverted by itself has no usable diagonal correction
            if t.inverse_policy == "involutional" or (
                t.inverse_policy == "paired" and t.q == 8
            ):
                raise InvalidConfiguration(
                    "the beta = 1 transform cannot serve as its own inverse; "
                    "pair it with the beta = 2 matrix instead"
                )

    @property
    def bitrate(self) -> float:
        return self.retained * self.bit_depth / BLOCK_COEFFS


def retained_for_bitrate(bpv: float, bit_depth: int) -> int:
    """Invert bitrate = L*b/512; rejects rates off the integer-L lattice."""
    exact = bpv * BLOCK_COEFFS / bit_depth
    retained = round(exact)
    if abs(exact - retained) > 1e-9 or not 1 <= retained <= BLOCK_COEFFS:
        raise NonIntegralRetention(
            f"bitrate {bpv} bpv at {bit_depth}-bit does not give an integer "
            f"coefficient count in 1..512"
        )
    return retained


@dataclass(frozen=True)
class BlockMap:
    """Original extents of a partitioned volume (blocks are padded to 8)."""

    dims: tuple[int, int, int]

    @property
    def grid(self) -> tuple[int, int, int]:
        return tuple((d + 7) // 8 for d in self.dims)

    @property
    def block_count(self) -> int:
        g = self.grid
        return g[0] * g[1] * g[2]


def block_count(dims) -> int:
    return BlockMap(tuple(dims)).block_count


def partition(volume: np.ndarray) -> tuple[np.ndarray, BlockMap]:
    """Split into row-major 8x8x8 blocks, replicating edge planes to pad."""
    v = np.asarray(volume)
    if v.ndim != 3 or v.size == 0:
        raise DimensionMismatch(f"expected a nonempty 3D volume, got shape {v.shape}")
    pad = [(0, (-d) % 8) for d in v.shape]
    padded = np.pad(v, pad, mode="edge")
    g1, g2, g3 = (d // 8 for d in padded.shape)
    blocks = (
        padded.reshape(g1, 8, g2, 8, g3, 8)
        .transpose(0, 2, 4, 1, 3, 5)
        .reshape(-1, 8, 8, 8)
    )
    return np.ascontiguousarray(blocks), BlockMap(v.shape)


def reassemble(blocks: np.ndarray, bmap: BlockMap) -> np.ndarray:
    g1, g2, g3 = bmap.grid
    if blocks.shape != (g1 * g2 * g3, 8, 8, 8):
        raise DimensionMismatch(
            f"expected {g1 * g2 * g3} blocks for dims {bmap.dims}, "
            f"got shape {blocks.shape}"
        )
    padded = (
        blocks.reshape(g1, g2, g3, 8, 8, 8)
        .transpose(0, 3, 1, 4, 2, 5)
        .reshape(g1 * 8, g2 * 8, g3 * 8)
    )
    n1, n2, n3 = bmap.dims
    return np.ascontiguousarray(padded[:n1, :n2, :n3])


@dataclass(frozen=True, eq=False)
class CompressedVolume:
    """Per-block retained coefficients in zigzag rank order."""

    dims: tuple[int, int, int]
    config: CodecConfig
    data: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        expected = (block_count(self.dims), self.config.retained)
        if self.data.shape != expected:
            raise DimensionMismatch(
                f"coefficient array must be {expected}, got {self.data.shape}"
            )

    def truncated(self, retained: int) -> "CompressedVolume":
        """A lower-rate view of the same encoding (ranks are nested)."""
        if retained > self.config.retained:
            raise InvalidConfiguration(
                f"cannot extend {self.config.retained} kept coefficients "
                f"to {retained}"
            )
        cfg = CodecConfig(
            self.config.transform, retained, self.config.zigzag, self.config.bit_depth
        )
        return CompressedVolume(self.dims, cfg, self.data[:, :retained])


def encode(volume: np.ndarray, config: CodecConfig) -> CompressedVolume:
    v = np.asarray(volume)
    blocks, bmap = partition(v)
    coeffs = batch_forward(blocks.astype(float), config.transform)
    flat = coeffs.reshape(-1, BLOCK_COEFFS)
    kept = flat[:, list(config.zigzag.order[: config.retained])]
    return CompressedVolume(bmap.dims, config, np.ascontiguousarray(kept))


def decode(compressed: CompressedVolume,
           config: CodecConfig | None = None) -> np.ndarray:
    """Reconstruct integer samples; optionally cross-check the config."""
    if config is not None and config != compressed.config:
        raise ConfigMismatch(
            "decode configuration does not match the one used for encoding"
        )
    cfg = compressed.config
    bmap = BlockMap(compressed.dims)
    flat = np.zeros((bmap.block_count, BLOCK_COEFFS))
    flat[:, list(cfg.zigzag.order[: cfg.retained])] = compressed.data
    blocks = batch_inverse(flat.reshape(-1, 8, 8, 8), cfg.transform)
    volume = reassemble(blocks, bmap)
    peak = 2**cfg.bit_depth - 1
    rounded = np.clip(np.rint(volume), 0, peak)
    return rounded.astype(np.uint8 if cfg.bit_depth == 8 else np.uint16)


# --- stream format --------------------------------------------------------

_MAGIC = b"H3DC"
_VERSION = 1
_KIND_CODES = {"dht": 0, "dct": 1, "approx": 2}
_POLICY_CODES = {"involutional": 0, "paired": 1, "exact_inverse": 2}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}
_POLICY_NAMES = {v: k for k, v in _POLICY_CODES.items()}
_HEADER = struct.Struct("<4sBBBBBBIIIHb")


def pack_stream(compressed: CompressedVolume) -> bytes:
    """Serialize: header, 512-entry zigzag table, B*L scaled coefficients.

    Coefficients are stored as round(c * 2**scale) in signed 32 bits with
    one global power-of-two scale chosen to use the int32 range; for
    dyadic transforms on 8-bit data the scaling is exact, so pack/unpack
    is a perfect round trip.
    """
    cfg = compressed.config
    t = cfg.transform
    data = compressed.data
    peak = float(np.max(np.abs(data))) if data.size else 0.0
    if peak == 0.0:
        scale = 0
    else:
        scale = int(math.floor(math.log2((2**31 - 1) / peak)))
    scale = max(-64, min(64, scale))
    quantized = np.rint(data * 2.0**scale)
    header = _HEADER.pack(
        _MAGIC,
        _VERSION,
        cfg.bit_depth,
        _KIND_CODES[t.kind],
        t.m or 0,
        _POLICY_CODES[t.inverse_policy],
        t.q or 0,
        *compressed.dims,
        cfg.retained,
        scale,
    )
    table = np.asarray(cfg.zigzag.order, dtype="<u2").tobytes()
    return header + table + quantized.astype("<i4").tobytes()


def unpack_stream(payload: bytes) -> CompressedVolume:
    table_bytes = BLOCK_COEFFS * 2
    if len(payload) < _HEADER.size + table_bytes:
        raise StreamFormatError("stream shorter than header + zigzag table")
    (magic, version, bit_depth, kind_code, m, policy_code, q,
     n1, n2, n3, retained, scale) = _HEADER.unpack_from(payload)
    if magic != _MAGIC:
        raise StreamFormatError(f"bad magic {magic!r}")
    if version != _VERSION:
        raise StreamFormatError(f"unsupported stream version {version}")
    if kind_code not in _KIND_NAMES or policy_code not in _POLICY_NAMES:
        raise StreamFormatError("unknown transform or policy code")
    table = np.frombuffer(
        payload, dtype="<u2", count=BLOCK_COEFFS, offset=_HEADER.size
    )
    body = payload[_HEADER.size + table_bytes:]
    dims = (n1, n2, n3)
    expected = block_count(dims) * retained * 4
    if len(body) != expected:
        raise StreamFormatError(
            f"coefficient payload is {len(body)} bytes, expected {expected}"
        )
    try:
        kind = _KIND_NAMES[kind_code]
        spec = TransformSpec(
            kind,
            m or None if kind == "approx" else None,
            _POLICY_NAMES[policy_code],
            q or None,
        )
        config = CodecConfig(
            spec, retained, ZigzagOrder(tuple(int(v) for v in table)), bit_depth
        )
    except InvalidConfiguration as exc:
        raise StreamFormatError(str(exc)) from None
    quantized = np.frombuffer(body, dtype="<i4").astype(float)
    data = (quantized * 2.0**-scale).reshape(block_count(dims), retained)
    return CompressedVolume(dims, config, data)


# --- rate-distortion evaluation -------------------------------------------

@dataclass(frozen=True)
class SweepPoint:
    method: str
    bpv: float
    retained: int
    psnr_db: float
    ssim: float


SWEEP_COLUMNS = ("method", "bpv", "L", "psnr_db", "ssim")


def sweep_rows(points: list[SweepPoint]) -> list[list]:
    return [
        [p.method, f"{p.bpv:.3f}", p.retained, f"{p.psnr_db:.4f}", f"{p.ssim:.6f}"]
        for p in points
    ]


def _sweep_cell(volume, spec: TransformSpec, zigzag: ZigzagOrder,
                retained_grid: list[int], bit_depth: int) -> list[QualityReport]:
    top = CodecConfig(spec, max(retained_grid), zigzag, bit_depth)
    full = encode(volume, top)
    weight = block_count(full.dims)
    reports = []
    for retained in retained_grid:
        recon = decode(full.truncated(retained))
        reports.append(quality_report(volume, recon, bit_depth, weight=weight))
    return reports


def rate_distortion_sweep(volumes, transforms, bitrates=DEFAULT_BITRATES,
                          bit_depth: int = 8, zigzags=None,
                          threads: int = 1) -> list[SweepPoint]:
    """Evaluate every (transform, bitrate) cell on one or more volumes.

    Each volume is encoded once per transform at the largest requested
    rate and truncated for the rest.  Multi-volume results are weighted
    by block count.  threads > 1 parallelizes over (volume, transform)
    cells with bit-identical results.
    """
    if isinstance(volumes, np.ndarray):
        volumes = [volumes]
    volumes = [np.asarray(v) for v in volumes]
    bitrates = sorted(bitrates)
    retained_grid = [retained_for_bitrate(b, bit_depth) for b in bitrates]
    specs = list(transforms)
    tables = {
        spec: (zigzags[spec] if zigzags and spec in zigzags else default_zigzag(spec))
        for spec in specs
    }
    cells = [(v, spec) for spec in specs for v in volumes]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_sweep_cell, v, spec, tables[spec], retained_grid,
                            bit_depth)
                for v, spec in cells
            ]
            results = [f.result() for f in futures]
    else:
        results = [
            _sweep_cell(v, spec, tables[spec], retained_grid, bit_depth)
            for v, spec in cells
        ]
    points = []
    for si, spec in enumerate(specs):
        per_volume = results[si * len(volumes): (si + 1) * len(volumes)]
        for bi, bpv in enumerate(bitrates):
            merged = aggregate([reports[bi] for reports in per_volume])
            points.append(
                SweepPoint(spec.label(), bpv, retained_grid[bi],
                           merged.psnr_db, merged.ssim)
            )
    return points
