"""Multiplierless 8-point Hartley approximations, their 3D lift, and a
fixed-bitrate volumetric codec built on them."""

from .codec import (
    DEFAULT_BITRATES,
    CodecConfig,
    CompressedVolume,
    SweepPoint,
    ZigzagOrder,
    dct_zigzag,
    decode,
    encode,
    pack_stream,
    partition,
    rate_distortion_sweep,
    reassemble,
    train_zigzag,
    unpack_stream,
)
from .complexity import (
    ComplexityRow,
    CountingScalar,
    OpCounter,
    complexity_table,
    count_3d_batch,
    lift_3d,
    verified_count,
)
from .dyadic import CsdForm, DyadicRational, csd_encode
from .errors import (
    ConfigMismatch,
    DimensionMismatch,
    EmptyTrainingSet,
    Hartley3dError,
    InvalidConfiguration,
    LengthMismatch,
    MalformedSidecar,
    NonIntegralRetention,
    NonInvertibleGram,
    SingularParameter,
    SliceTooSmall,
    StreamFormatError,
)
from .kernels import (
    SQRT2,
    FactorizationStages,
    OpCount,
    ParametricHartleyMatrix,
    build_parametric,
    build_stages,
    count_1d,
    count_dct_1d,
    dct_fast_apply,
    diagonal_correction,
    exact_dct_matrix,
    exact_dht_matrix,
    fast_apply,
)
from .metrics import QualityReport, aggregate, psnr, quality_report, ssim
from .search import (
    CandidateReport,
    MetricConfig,
    coding_gain_db,
    deviation_from_diagonality,
    mse_vs_exact,
    sweep,
)
from .tensor3 import (
    Tensor3,
    TransformSpec,
    batch_forward,
    batch_inverse,
    dht3_forward,
    dht3_inverse,
    i_mode_product,
    row_column_execute,
    sdht3_forward,
    sdht_to_dht,
)
from .volume_io import (
    VolumeHeader,
    read_volume,
    synthesize_ar1_blocks,
    synthesize_ar1_volume,
    write_csv,
    write_plot,
    write_volume,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BITRATES",
    "SQRT2",
    "CandidateReport",
    "CodecConfig",
    "ComplexityRow",
    "CompressedVolume",
    "ConfigMismatch",
    "CountingScalar",
    "CsdForm",
    "DimensionMismatch",
    "DyadicRational",
    "EmptyTrainingSet",
    "FactorizationStages",
    "Hartley3dError",
    "InvalidConfiguration",
    "LengthMismatch",
    "MalformedSidecar",
    "MetricConfig",
    "NonIntegralRetention",
    "NonInvertibleGram",
    "OpCount",
    "OpCounter",
    "ParametricHartleyMatrix",
    "QualityReport",
    "SingularParameter",
    "SliceTooSmall",
    "StreamFormatError",
    "SweepPoint",
    "Tensor3",
    "TransformSpec",
    "VolumeHeader",
    "ZigzagOrder",
    "aggregate",
    "batch_forward",
    "batch_inverse",
    "build_parametric",
    "build_stages",
    "coding_gain_db",
    "complexity_table",
    "count_1d",
    "count_3d_batch",
    "count_dct_1d",
    "csd_encode",
    "dct_fast_apply",
    "dct_zigzag",
    "decode",
    "deviation_from_diagonality",
    "dht3_forward",
    "dht3_inverse",
    "diagonal_correction",
    "encode",
    "exact_dct_matrix",
    "exact_dht_matrix",
    "fast_apply",
    "i_mode_product",
    "lift_3d",
    "mse_vs_exact",
    "pack_stream",
    "partition",
    "psnr",
    "quality_report",
    "rate_distortion_sweep",
    "read_volume",
    "reassemble",
    "row_column_execute",
    "sdht3_forward",
    "sdht_to_dht",
    "ssim",
    "sweep",
    "synthesize_ar1_blocks",
    "synthesize_ar1_volume",
    "train_zigzag",
    "unpack_stream",
    "verified_count",
    "write_csv",
    "write_plot",
    "write_volume",
]
