"""Command-line behavior: parsing, exit codes, end-to-end file flows."""

import numpy as np
import pytest

from hartley3d.cli import _parse_method, build_parser, run
from hartley3d.errors import InvalidConfiguration
from hartley3d.tensor3 import TransformSpec
from hartley3d.volume_io import (
    read_volume,
    synthesize_ar1_volume,
    write_volume,
)


@pytest.fixture
def volume_file(tmp_path):
    path = tmp_path / "orig.raw"
    vol = synthesize_ar1_volume((16, 16, 16), seed=5)
    write_volume(path, vol)
    return path, vol


def _lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


class TestMethodParsing:
    def test_exact_kinds(self):
        assert _parse_method("dht") == TransformSpec("dht")
        assert _parse_method("DCT") == TransformSpec("dct")

    def test_approx_tokens(self):
        assert _parse_method("11") == TransformSpec("approx", 11, "involutional")
        assert _parse_method("11:12") == TransformSpec("approx", 11, "paired", 12)
        assert _parse_method("11:exact") == TransformSpec("approx", 11,
                                                          "exact_inverse")

    @pytest.mark.parametrize("token", ["fht", "11:banana", "", "x:4"])
    def test_rejects_garbage(self, token):
        with pytest.raises(InvalidConfiguration):
            _parse_method(token)

    def test_out_of_grid(self):
        with pytest.raises(InvalidConfiguration):
            _parse_method("25")


class TestTopLevel:
    def test_version_flag(self, capsys):
        assert run(["--version"]) == 0

    def test_no_arguments(self, capsys):
        assert run([]) == 2

    def test_unknown_subcommand(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_parser_lists_subcommands(self):
        text = build_parser().format_help()
        for name in ("search", "transform", "compress", "decompress",
                     "evaluate", "complexity", "bench"):
            assert name in text


class TestSearchCommand:
    def test_report_and_selection(self, capsys, tmp_path):
        out = tmp_path / "report.csv"
        assert run(["search", "--out", str(out)]) == 0
        lines = _lines(capsys)
        assert lines[0] == f"[search] rho=0.95 out={out}"
        assert lines[1].startswith("m,beta,delta_self")
        assert len([l for l in lines if l[0].isdigit()]) == 24
        selected = next(l for l in lines if l.startswith("selected:"))
        assert "beta=11/8 (inverse beta=12/8)" in selected
        assert out.exists()


class TestComplexityCommand:
    def test_table(self, capsys, tmp_path):
        out = tmp_path / "ops.csv"
        assert run(["complexity", "--out", str(out)]) == 0
        lines = _lines(capsys)
        assert "method,multiplications,additions,shifts" in lines
        assert "3D DCT (row-column, fast 1D DCT),2112,5568,0" in lines
        assert "3D DHT approximation (beta=11/8),0,6528,768" in lines
        assert any(l.startswith("note:") for l in lines)
        assert out.exists()


class TestTransformCommand:
    def test_forward_inverse_roundtrip(self, capsys, tmp_path, volume_file):
        path, vol = volume_file
        fwd = tmp_path / "fwd.raw"
        back = tmp_path / "back.raw"
        assert run(["transform", "--in", str(path), "--out", str(fwd),
                    "--method", "dht"]) == 0
        assert run(["transform", "--in", str(fwd), "--out", str(back),
                    "--method", "dht", "--direction", "inverse"]) == 0
        restored = read_volume(back)
        assert np.max(np.abs(restored - vol)) < 1e-9

    def test_bad_method_is_usage_error(self, capsys, volume_file, tmp_path):
        path, _ = volume_file
        code = run(["transform", "--in", str(path),
                    "--out", str(tmp_path / "x.raw"), "--method", "nope"])
        assert code == 2

    def test_missing_input_is_data_error(self, capsys, tmp_path):
        code = run(["transform", "--in", str(tmp_path / "missing.raw"),
                    "--out", str(tmp_path / "x.raw"), "--method", "dht"])
        assert code == 3


class TestCompressionCommands:
    def test_lossless_cycle(self, capsys, tmp_path, volume_file):
        path, vol = volume_file
        stream = tmp_path / "c.h3dc"
        recon = tmp_path / "rec.raw"
        assert run(["compress", "--in", str(path), "--out", str(stream),
                    "--method", "8:16", "--retain", "512"]) == 0
        out = capsys.readouterr().out
        assert "bitrate: 8.000 bpv" in out
        assert stream.exists()
        assert run(["decompress", "--in", str(stream), "--out", str(recon)]) == 0
        assert np.array_equal(read_volume(recon), vol)

    def test_bitrate_flag(self, capsys, tmp_path, volume_file):
        path, _ = volume_file
        stream = tmp_path / "c.h3dc"
        assert run(["compress", "--in", str(path), "--out", str(stream),
                    "--method", "dht", "--bpv", "2.0"]) == 0
        assert "retained=128" in capsys.readouterr().out

    def test_off_lattice_bitrate(self, capsys, tmp_path, volume_file):
        path, _ = volume_file
        code = run(["compress", "--in", str(path),
                    "--out", str(tmp_path / "c.h3dc"),
                    "--method", "dht", "--bpv", "0.3"])
        assert code == 2

    def test_float_input_rejected(self, capsys, tmp_path):
        path = tmp_path / "f.raw"
        write_volume(path, np.zeros((8, 8, 8)))
        code = run(["compress", "--in", str(path),
                    "--out", str(tmp_path / "c.h3dc"),
                    "--method", "dht", "--retain", "8"])
        assert code == 2

    def test_corrupt_stream(self, capsys, tmp_path):
        bad = tmp_path / "bad.h3dc"
        bad.write_bytes(b"not a stream at all")
        code = run(["decompress", "--in", str(bad),
                    "--out", str(tmp_path / "x.raw")])
        assert code == 3


class TestEvaluateCommand:
    def test_identical_pair(self, capsys, tmp_path, volume_file):
        path, vol = volume_file
        copy = tmp_path / "copy.raw"
        write_volume(copy, vol)
        assert run(["evaluate", "--orig", str(path), "--recon", str(copy)]) == 0
        out = capsys.readouterr().out
        assert "psnr_db: inf" in out
        assert "ssim: 1.000000" in out

    def test_requires_inputs(self, capsys):
        assert run(["evaluate"]) == 2

    def test_small_slices_are_data_errors(self, capsys, tmp_path):
        path = tmp_path / "tiny.raw"
        write_volume(path, np.zeros((8, 8, 8), dtype=np.uint8))
        assert run(["evaluate", "--orig", str(path),
                    "--recon", str(path)]) == 3

    def test_synthetic_sweep(self, capsys, tmp_path):
        csv = tmp_path / "sweep.csv"
        plot = tmp_path / "sweep.svg"
        assert run(["evaluate", "--sweep", "--synthetic", "16",
                    "--methods", "dht,11:12", "--bitrates", "0.625,2.125",
                    "--out-csv", str(csv), "--out-plot", str(plot)]) == 0
        lines = _lines(capsys)
        assert "method,bpv,L,psnr_db,ssim" in lines
        data = [l for l in lines if l.startswith(("dht,", "approx"))]
        assert len(data) == 4
        assert csv.exists() and plot.exists()
        assert csv.read_text().startswith("method,bpv,L,psnr_db,ssim")


class TestBenchCommand:
    def test_counts_and_timing(self, capsys):
        assert run(["bench", "--blocks", "8", "--repeat", "1"]) == 0
        lines = _lines(capsys)
        header = next(l for l in lines if l.startswith("method,"))
        assert header == ("method,mult_per_block,add_per_block,"
                          "shift_per_block,mean_seconds,time_vs_dct")
        per_method = {
            l.split(",")[0]: l.split(",")[1:4]
            for l in lines if l.startswith(("3D ", "approx"))
        }
        assert per_method["3D DCT"] == ["2112", "5568", "0"]
        assert per_method["3D DHT"] == ["384", "5760", "0"]
        for label in ("approx beta=1", "approx beta=11/8",
                      "approx beta=3/2", "approx beta=2"):
            assert per_method[label][0] == "0"
