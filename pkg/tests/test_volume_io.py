"""Raw volume files, sidecars, CSV/plot writers, synthetic sources."""

import numpy as np
import pytest

from hartley3d.errors import DimensionMismatch, LengthMismatch, MalformedSidecar
from hartley3d.volume_io import (
    VolumeHeader,
    read_header,
    read_volume,
    sidecar_path,
    synthesize_ar1_blocks,
    synthesize_ar1_volume,
    write_bytes,
    write_csv,
    write_plot,
    write_volume,
)

RNG = np.random.default_rng(55)


class TestVolumeHeader:
    def test_dtype_selection(self):
        assert VolumeHeader((2, 2, 2), 8).dtype == np.dtype("<u1")
        assert VolumeHeader((2, 2, 2), 16).dtype == np.dtype("<u2")
        assert VolumeHeader((2, 2, 2), 8, "float64").dtype == np.dtype("<f8")

    def test_payload_bytes(self):
        assert VolumeHeader((4, 5, 6), 16).payload_bytes() == 240

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(dims=(0, 2, 2), bit_depth=8),
            dict(dims=(2, 2), bit_depth=8),
            dict(dims=(2, 2, 2), bit_depth=12),
            dict(dims=(2, 2, 2), bit_depth=8, sample_format="int32"),
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(MalformedSidecar):
            VolumeHeader(**kwargs)


class TestVolumeRoundTrips:
    def test_uint8(self, tmp_path):
        path = tmp_path / "v.raw"
        vol = RNG.integers(0, 256, size=(4, 6, 8)).astype(np.uint8)
        header = write_volume(path, vol)
        assert header.bit_depth == 8
        assert np.array_equal(read_volume(path), vol)

    def test_uint16_autodetected(self, tmp_path):
        path = tmp_path / "v.raw"
        vol = RNG.integers(0, 4096, size=(4, 4, 4))
        vol[0, 0, 0] = 4000
        header = write_volume(path, vol)
        assert header.bit_depth == 16
        assert np.array_equal(read_volume(path), vol)

    def test_float64(self, tmp_path):
        path = tmp_path / "v.raw"
        vol = RNG.standard_normal((3, 4, 5))
        header = write_volume(path, vol)
        assert header.sample_format == "float64"
        assert np.array_equal(read_volume(path), vol)

    def test_sidecar_contents(self, tmp_path):
        path = tmp_path / "v.raw"
        write_volume(path, np.zeros((2, 3, 4), dtype=np.uint8))
        text = sidecar_path(path).read_text()
        assert text == "dims: 2 3 4\nbit_depth: 8\nsample_format: uint\n"

    def test_range_validation(self, tmp_path):
        with pytest.raises(ValueError):
            write_volume(tmp_path / "v.raw",
                         np.full((2, 2, 2), 300), bit_depth=8)
        with pytest.raises(ValueError):
            write_volume(tmp_path / "v.raw",
                         np.full((2, 2, 2), -1), bit_depth=8)

    def test_rejects_non_3d(self, tmp_path):
        with pytest.raises(DimensionMismatch):
            write_volume(tmp_path / "v.raw", np.zeros((4, 4)))

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "v.raw"
        write_volume(path, np.zeros((4, 4, 4), dtype=np.uint8))
        path.write_bytes(path.read_bytes()[:-1])
        with pytest.raises(LengthMismatch):
            read_volume(path)


class TestSidecarParsing:
    def _read(self, tmp_path, text):
        path = tmp_path / "v.raw"
        path.write_bytes(b"")
        sidecar_path(path).write_text(text)
        return read_header(path)

    def test_comments_and_blanks(self, tmp_path):
        header = self._read(
            tmp_path,
            "# generated\n\ndims: 1 2 3  # inline\nbit_depth: 16\n",
        )
        assert header.dims == (1, 2, 3)
        assert header.bit_depth == 16
        assert header.sample_format == "uint"

    def test_missing_sidecar(self, tmp_path):
        path = tmp_path / "nope.raw"
        path.write_bytes(b"")
        with pytest.raises(MalformedSidecar):
            read_header(path)

    @pytest.mark.parametrize(
        "text",
        [
            "bit_depth: 8\n",  # dims missing
            "dims: 1 2 3\n",  # bit_depth missing
            "dims: 1 2 3\nbit_depth: 8\ncolor: red\n",
            "dims: 1 2 3\ndims: 1 2 3\nbit_depth: 8\n",
            "dims: one two three\nbit_depth: 8\n",
            "dims 1 2 3\nbit_depth: 8\n",
        ],
    )
    def test_malformed(self, tmp_path, text):
        with pytest.raises(MalformedSidecar):
            self._read(tmp_path, text)


class TestWriters:
    def test_write_bytes_overwrites(self, tmp_path):
        path = tmp_path / "blob"
        write_bytes(path, b"one")
        write_bytes(path, b"two")
        assert path.read_bytes() == b"two"
        assert list(tmp_path.iterdir()) == [path]  # no temp files left

    def test_write_csv(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(path, ("a", "b"), [[1, 2.5], ["x", "y"]])
        assert path.read_bytes() == b"a,b\r\n1,2.5\r\nx,y\r\n"

    def test_write_plot(self, tmp_path):
        path = tmp_path / "rd.svg"
        points = [("dht", 0.5, 30.0, 0.9), ("dht", 1.0, 35.0, 0.95),
                  ("dct", 0.5, 31.0, 0.91)]
        assert write_plot(path, points)
        assert path.stat().st_size > 0

    def test_write_plot_empty(self, tmp_path):
        path = tmp_path / "rd.svg"
        assert not write_plot(path, [])
        assert not path.exists()


class TestSynthesis:
    def test_deterministic(self):
        a = synthesize_ar1_volume((8, 8, 8), seed=3)
        b = synthesize_ar1_volume((8, 8, 8), seed=3)
        c = synthesize_ar1_volume((8, 8, 8), seed=4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_full_range(self):
        v = synthesize_ar1_volume((16, 16, 16), seed=0)
        assert v.dtype == np.uint8
        assert v.min() == 0 and v.max() == 255

    def test_sixteen_bit(self):
        v = synthesize_ar1_volume((8, 8, 8), bit_depth=16, seed=0)
        assert v.dtype == np.uint16
        assert v.max() == 65535

    def test_neighbor_correlation(self):
        # quantization to 8 bits pulls the sample correlation slightly
        # below the nominal rho
        v = synthesize_ar1_volume((64, 64, 64), rho=0.95, seed=0).astype(float)
        for axis in range(3):
            a = np.moveaxis(v, axis, 0)
            r = np.corrcoef(a[:-1].ravel(), a[1:].ravel())[0, 1]
            assert 0.90 < r < 0.97, f"axis {axis}: {r}"

    def test_blocks(self):
        blocks = synthesize_ar1_blocks(10, seed=1)
        assert blocks.shape == (10, 8, 8, 8)
        assert np.array_equal(blocks, synthesize_ar1_blocks(10, seed=1))
        with pytest.raises(ValueError):
            synthesize_ar1_blocks(0)
