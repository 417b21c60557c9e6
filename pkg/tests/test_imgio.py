import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import BLOCK
from hwz.errors import BadFormat, IoFailure, TruncatedFile, UnsupportedMaxval
from hwz.imgio import crop_and_quantize, format_pgm, pad_to_pow2, parse_pgm, read_pgm, write_pgm

shapes = st.tuples(st.integers(1, 20), st.integers(1, 20))


def test_parse_ascii():
    img = parse_pgm(b"P2\n2 2\n255\n0 255 128 64\n")
    assert img.tolist() == [[0, 255], [128, 64]]
    assert img.dtype == np.uint8


def test_parse_with_comments():
    data = b"P2\n# made by hand\n3 1 # width height\n# max\n200\n1 2\n# mid raster\n3\n"
    assert parse_pgm(data).tolist() == [[1, 2, 3]]


def test_binary_header_comment():
    data = b"P5 # c\n2 1\n255\n" + bytes([10, 250])
    assert parse_pgm(data).tolist() == [[10, 250]]


def test_fixture_file_matches_block(data_dir):
    assert np.array_equal(read_pgm(data_dir / "block8x8.pgm"), BLOCK)


@pytest.mark.parametrize(
    "data, err",
    [
        (b"P6\n1 1\n255\n\x00\x00\x00", BadFormat),
        (b"P2\n1 1\n65535\n0\n", UnsupportedMaxval),
        (b"P5\n1 1\n65535\n\x00\x00", UnsupportedMaxval),
        (b"P2\n2 2\n255\n1 2 3\n", TruncatedFile),
        (b"P5\n2 2\n255\n\x00\x01\x02", TruncatedFile),
        (b"P2\n2 2\n", TruncatedFile),
        (b"P2\n1 1\n100\n101\n", BadFormat),
        (b"P2\n1 1\n255\nx\n", BadFormat),
        (b"P2\nx 1\n255\n1\n", BadFormat),
    ],
)
def test_parse_errors(data, err):
    with pytest.raises(err):
        parse_pgm(data)


def test_missing_file(tmp_path):
    with pytest.raises(IoFailure):
        read_pgm(tmp_path / "absent.pgm")
    with pytest.raises(IoFailure):
        write_pgm(BLOCK, tmp_path / "no" / "such" / "dir.pgm")


@settings(max_examples=50, deadline=None)
@given(shapes.flatmap(lambda s: arrays(np.uint8, s)), st.booleans())
def test_write_read_roundtrip(img, binary):
    assert np.array_equal(parse_pgm(format_pgm(img, binary)), img)


@pytest.mark.parametrize("shape", [(1, 1), (256, 256)])
def test_file_roundtrip(tmp_path, rng, shape):
    img = rng.integers(0, 256, shape).astype(np.uint8)
    for binary in (True, False):
        path = tmp_path / f"x{binary}.pgm"
        write_pgm(img, path, binary=binary)
        assert np.array_equal(read_pgm(path), img)
    assert (tmp_path / "xTrue.pgm").read_bytes().startswith(b"P5")


def test_pad_identity_for_pow2(rng):
    img = rng.integers(0, 256, (256, 256))
    padded, dims = pad_to_pow2(img)
    assert dims == (256, 256) and np.array_equal(padded, img) and padded.dtype == np.float64


def test_pad_replicates_edges():
    img = np.arange(12).reshape(3, 4)
    padded, dims = pad_to_pow2(img)
    assert dims == (3, 4) and padded.shape == (4, 4)
    assert np.array_equal(padded[3], padded[2])
    img5 = np.arange(25).reshape(5, 5)
    p5, _ = pad_to_pow2(img5)
    assert p5.shape == (8, 8)
    for j in range(5, 8):
        assert np.array_equal(p5[:5, j], img5[:, 4])
    assert np.all(p5[5:, :5] == img5[4])


def test_crop_and_quantize_rules():
    m = np.array([[127.5, -3.2, 260.0, 2.5], [0.49, 254.5, -0.5, 7.0]])
    assert crop_and_quantize(m, (2, 4)).tolist() == [[128, 0, 255, 3], [0, 255, 0, 7]]
    assert crop_and_quantize(m, (1, 2)).tolist() == [[128, 0]]


@settings(max_examples=50, deadline=None)
@given(shapes.flatmap(lambda s: arrays(np.uint8, s)))
def test_pad_then_crop_identity(img):
    padded, dims = pad_to_pow2(img)
    assert np.array_equal(crop_and_quantize(padded, dims), img)
