"""Command-line front end.

Subcommands: search, transform, compress, decompress, evaluate,
complexity, bench.  Exit codes: 0 success, 2 usage/configuration error,
3 data error.  Output files are written atomically, so a failing run
never leaves partial artifacts.

Methods are named by compact tokens: "dht" and "dct" are the exact
kernels; "11" is the beta = 11/8 approximation inverted by itself,
"11:12" pairs it with beta = 12/8 for the inverse, and "11:exact" uses
the true matrix inverse.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .codec import (
    DEFAULT_BITRATES,
    SWEEP_COLUMNS,
    BlockMap,
    CodecConfig,
    decode,
    default_zigzag,
    encode,
    pack_stream,
    partition,
    rate_distortion_sweep,
    reassemble,
    retained_for_bitrate,
    sweep_rows,
    unpack_stream,
)
from .complexity import batch_transform_3d, complexity_table, count_3d_batch
from .errors import (
    ConfigMismatch,
    DimensionMismatch,
    EmptyTrainingSet,
    InvalidConfiguration,
    LengthMismatch,
    MalformedSidecar,
    NonInvertibleGram,
    SingularParameter,
    SliceTooSmall,
    StreamFormatError,
)
from .metrics import psnr, ssim
from .search import (
    REPORT_COLUMNS,
    SELECTED_MS,
    MetricConfig,
    best_inverse,
    report_rows,
    sweep,
)
from .tensor3 import TransformSpec, batch_forward, batch_inverse
from .volume_io import (
    read_header,
    read_volume,
    synthesize_ar1_blocks,
    synthesize_ar1_volume,
    write_bytes,
    write_csv,
    write_plot,
    write_volume,
)

_METHOD_HELP = (
    "dht | dct | M | M:Q | M:exact, with M, Q in 1..24 naming the "
    "beta = M/8 approximation (M alone reuses the matrix as its inverse, "
    "M:Q pairs it with beta = Q/8, M:exact inverts exactly)"
)

_DATA_ERRORS = (
    MalformedSidecar,
    LengthMismatch,
    StreamFormatError,
    DimensionMismatch,
    SliceTooSmall,
    EmptyTrainingSet,
    NonInvertibleGram,
    SingularParameter,
    ConfigMismatch,
)


def _parse_method(token: str) -> TransformSpec:
    t = token.strip().lower()
    if t in ("dht", "dct"):
        return TransformSpec(t)
    head, _, tail = t.partition(":")
    try:
        m = int(head)
    except ValueError:
        raise InvalidConfiguration(
            f"unknown method {token!r}; expected {_METHOD_HELP}"
        ) from None
    if not tail:
        return TransformSpec("approx", m, "involutional")
    if tail == "exact":
        return TransformSpec("approx", m, "exact_inverse")
    try:
        q = int(tail)
    except ValueError:
        raise InvalidConfiguration(
            f"unknown inverse {tail!r} in method {token!r}"
        ) from None
    return TransformSpec("approx", m, "paired", q)


def _print_config(command: str, **settings) -> None:
    rendered = " ".join(f"{key}={value}" for key, value in settings.items())
    print(f"[{command}] {rendered}")


def _print_table(columns, rows) -> None:
    print(",".join(str(c) for c in columns))
    for row in rows:
        print(",".join(str(c) for c in row))


def _cmd_search(args) -> int:
    config = MetricConfig(rho=args.rho)
    _print_config("search", rho=args.rho, out=args.out or "-")
    reports = sweep(config)
    rows = report_rows(reports)
    _print_table(REPORT_COLUMNS, rows)
    chosen = ", ".join(
        f"beta={m}/8 (inverse beta={best_inverse(m)}/8)" for m in SELECTED_MS
    )
    print(f"selected: {chosen}")
    if args.out:
        write_csv(args.out, REPORT_COLUMNS, rows)
        print(f"wrote {args.out}")
    return 0


def _cmd_transform(args) -> int:
    spec = _parse_method(args.method)
    header = read_header(args.input)
    volume = read_volume(args.input, header)
    _print_config(
        "transform",
        method=spec.label(),
        direction=args.direction,
        input=args.input,
        out=args.out,
    )
    blocks, bmap = partition(volume)
    if args.direction == "forward":
        out_blocks = batch_forward(blocks, spec)
    else:
        out_blocks = batch_inverse(blocks, spec)
    padded = BlockMap(tuple(8 * g for g in bmap.grid))
    result = reassemble(out_blocks, padded)
    write_volume(args.out, result, bit_depth=header.bit_depth)
    print(f"wrote {args.out} dims={result.shape} (block-padded)")
    return 0


def _cmd_compress(args) -> int:
    spec = _parse_method(args.method)
    header = read_header(args.input)
    if header.sample_format != "uint":
        raise InvalidConfiguration("compress expects an integer-sample volume")
    volume = read_volume(args.input, header)
    if args.retain is not None:
        retained = args.retain
    else:
        retained = retained_for_bitrate(args.bpv, header.bit_depth)
    zigzag = default_zigzag(
        spec, train_count=args.train_blocks, rho=args.rho, seed=args.seed
    )
    config = CodecConfig(spec, retained, zigzag, header.bit_depth)
    _print_config(
        "compress",
        method=spec.label(),
        retained=retained,
        bit_depth=header.bit_depth,
        dims="x".join(str(d) for d in volume.shape),
        seed=args.seed,
    )
    compressed = encode(volume, config)
    payload = pack_stream(compressed)
    write_bytes(args.out, payload)
    print(f"bitrate: {config.bitrate:.3f} bpv")
    print(f"wrote {args.out} ({len(payload)} bytes)")
    return 0


def _cmd_decompress(args) -> int:
    payload = Path(args.input).read_bytes()
    compressed = unpack_stream(payload)
    config = compressed.config
    _print_config(
        "decompress",
        method=config.transform.label(),
        retained=config.retained,
        bit_depth=config.bit_depth,
        dims="x".join(str(d) for d in compressed.dims),
    )
    volume = decode(compressed)
    write_volume(args.out, volume, config.bit_depth)
    print(f"wrote {args.out}")
    return 0


def _format_db(value: float) -> str:
    return "inf" if value == float("inf") else f"{value:.4f}"


def _cmd_evaluate(args) -> int:
    if not args.sweep:
        if not args.orig or args.recon is None:
            raise InvalidConfiguration(
                "evaluate needs --orig and --recon, or --sweep"
            )
        header = read_header(args.orig[0])
        original = read_volume(args.orig[0], header)
        reconstruction = read_volume(args.recon)
        _print_config(
            "evaluate", orig=args.orig[0], recon=args.recon,
            bit_depth=header.bit_depth,
        )
        print(f"psnr_db: {_format_db(psnr(original, reconstruction, header.bit_depth))}")
        print(f"ssim: {ssim(original, reconstruction, header.bit_depth):.6f}")
        return 0

    if args.orig:
        headers = [read_header(p) for p in args.orig]
        depths = {h.bit_depth for h in headers}
        if len(depths) != 1:
            raise InvalidConfiguration("sweep volumes must share one bit depth")
        bit_depth = depths.pop()
        volumes = [read_volume(p, h) for p, h in zip(args.orig, headers)]
    elif args.synthetic:
        bit_depth = 8
        dims = (args.synthetic,) * 3
        volumes = [synthesize_ar1_volume(dims, args.rho, bit_depth, args.seed)]
    else:
        raise InvalidConfiguration("sweep needs --orig volumes or --synthetic N")
    methods = [_parse_method(tok) for tok in args.methods.split(",") if tok.strip()]
    if not methods:
        raise InvalidConfiguration("no methods given")
    if args.bitrates:
        bitrates = [float(tok) for tok in args.bitrates.split(",")]
    else:
        bitrates = list(DEFAULT_BITRATES)
    _print_config(
        "evaluate",
        sweep=True,
        methods=";".join(m.label() for m in methods),
        volumes=len(volumes),
        bit_depth=bit_depth,
        points=len(bitrates),
        threads=args.threads,
        seed=args.seed,
    )
    points = rate_distortion_sweep(
        volumes, methods, bitrates, bit_depth=bit_depth, threads=args.threads
    )
    rows = sweep_rows(points)
    _print_table(SWEEP_COLUMNS, rows)
    if args.out_csv:
        write_csv(args.out_csv, SWEEP_COLUMNS, rows)
        print(f"wrote {args.out_csv}")
    if args.out_plot:
        plotted = write_plot(
            args.out_plot,
            [(p.method, p.bpv, p.psnr_db, p.ssim) for p in points],
        )
        print(f"wrote {args.out_plot}" if plotted else "no data; plot skipped")
    return 0


def _cmd_complexity(args) -> int:
    _print_config("complexity", out=args.out or "-")
    columns = ("method", "multiplications", "additions", "shifts")
    rows = [[r.method, *r.op_count_3d.as_tuple()] for r in complexity_table()]
    _print_table(columns, rows)
    for row in complexity_table():
        if row.note:
            print(f"note: {row.method}: {row.note}")
    if args.out:
        write_csv(args.out, columns, rows)
        print(f"wrote {args.out}")
    return 0


def _cmd_bench(args) -> int:
    _print_config(
        "bench", blocks=args.blocks, repeat=args.repeat, seed=args.seed,
        out=args.out or "-",
    )
    stack = synthesize_ar1_blocks(args.blocks, rho=args.rho, seed=args.seed)
    stack = stack.astype(float)
    methods = [
        ("3D DCT", TransformSpec("dct")),
        ("3D DHT", TransformSpec("dht")),
        ("approx beta=1", TransformSpec("approx", 8)),
        ("approx beta=11/8", TransformSpec("approx", 11)),
        ("approx beta=3/2", TransformSpec("approx", 12)),
        ("approx beta=2", TransformSpec("approx", 16)),
    ]
    results = []
    for label, spec in methods:
        counts, _ = count_3d_batch(stack, spec)
        elapsed = []
        for _ in range(args.repeat):
            start = time.perf_counter()
            batch_transform_3d(stack, spec)
            elapsed.append(time.perf_counter() - start)
        results.append((label, counts, sum(elapsed) / len(elapsed)))
    baseline = results[0][2] or 1.0
    columns = (
        "method", "mult_per_block", "add_per_block", "shift_per_block",
        "mean_seconds", "time_vs_dct",
    )
    rows = [
        [
            label,
            counts.multiplications // args.blocks,
            counts.additions // args.blocks,
            counts.shifts // args.blocks,
            f"{seconds:.6f}",
            f"{seconds / baseline:.3f}",
        ]
        for label, counts, seconds in results
    ]
    _print_table(columns, rows)
    if args.out:
        write_csv(args.out, columns, rows)
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hartley3d",
        description="Multiplierless 3D Hartley approximations: search, "
        "transform, compress, and evaluate 8x8x8 block pipelines.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="score the 24-candidate parameter grid")
    p.add_argument("--rho", type=float, default=0.95,
                   help="AR(1) correlation of the signal model")
    p.add_argument("--out", help="also write the report as CSV")
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("transform", help="blockwise forward/inverse 3D transform")
    p.add_argument("--in", dest="input", required=True, help="input volume")
    p.add_argument("--out", required=True, help="output volume (float64 samples)")
    p.add_argument("--method", required=True, help=_METHOD_HELP)
    p.add_argument("--direction", choices=("forward", "inverse"),
                   default="forward")
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("compress", help="encode a volume at a fixed bitrate")
    p.add_argument("--in", dest="input", required=True, help="input volume")
    p.add_argument("--out", required=True, help="output stream")
    p.add_argument("--method", required=True, help=_METHOD_HELP)
    rate = p.add_mutually_exclusive_group(required=True)
    rate.add_argument("--bpv", type=float, help="bits per voxel")
    rate.add_argument("--retain", type=int,
                      help="coefficients kept per block (1..512)")
    p.add_argument("--train-blocks", type=int, default=4096,
                   help="synthetic blocks used to train the zigzag order")
    p.add_argument("--rho", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_compress)

    p = sub.add_parser("decompress", help="decode a stream back to a volume")
    p.add_argument("--in", dest="input", required=True, help="input stream")
    p.add_argument("--out", required=True, help="output volume")
    p.set_defaults(handler=_cmd_decompress)

    p = sub.add_parser("evaluate",
                       help="PSNR/SSIM of a reconstruction, or a full sweep")
    p.add_argument("--orig", nargs="*", default=[], help="original volume(s)")
    p.add_argument("--recon", help="reconstructed volume")
    p.add_argument("--sweep", action="store_true",
                   help="run the rate-distortion grid instead")
    p.add_argument("--methods",
                   default="dht,dct,8:16,16:8,11:12,12:11,11,12",
                   help=f"comma-separated methods ({_METHOD_HELP})")
    p.add_argument("--bitrates", help="comma-separated bpv points")
    p.add_argument("--synthetic", type=int,
                   help="use a seeded synthetic N^3 volume instead of --orig")
    p.add_argument("--rho", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out-csv", help="write sweep rows as CSV")
    p.add_argument("--out-plot", help="write the rate-distortion figure (SVG)")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("complexity", help="per-block 3D operation counts")
    p.add_argument("--out", help="also write as CSV")
    p.set_defaults(handler=_cmd_complexity)

    p = sub.add_parser("bench",
                       help="instrumented counts and relative timings")
    p.add_argument("--blocks", type=int, default=512,
                   help="blocks per run (the full protocol uses 8192)")
    p.add_argument("--repeat", type=int, default=3,
                   help="timing repetitions (the full protocol uses 50)")
    p.add_argument("--rho", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write as CSV")
    p.set_defaults(handler=_cmd_bench)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # InvalidConfiguration, NonIntegralRetention, bad flag values
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
