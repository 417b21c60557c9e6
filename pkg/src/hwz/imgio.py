"""PGM reading/writing and the pad/crop steps around the transform."""

import re

import numpy as np

from .errors import BadFormat, IoFailure, TruncatedFile, UnsupportedMaxval

__all__ = ["read_pgm", "parse_pgm", "write_pgm", "format_pgm", "pad_to_pow2", "crop_and_quantize", "as_gray"]

_TOKEN = re.compile(rb"\s*(?:#[^\n\r]*[\n\r]\s*)*")


def as_gray(img):
    """Validate ``img`` as a 2D 8-bit raster and return it as ``uint8``."""
    a = np.asarray(img)
    if a.ndim != 2 or a.size == 0:
        raise BadFormat(f"expected a non-empty 2D image, got shape {a.shape}")
    if a.dtype != np.uint8:
        if np.any(a != np.round(a)) or a.min() < 0 or a.max() > 255:
            raise BadFormat("pixels must be integers in [0, 255]")
        a = a.astype(np.uint8)
    return a


def _header_fields(data, count):
    """Pull ``count`` whitespace/comment separated integers after the magic."""
    pos = 2
    fields = []
    for _ in range(count):
        pos = _TOKEN.match(data, pos).end()
        m = re.compile(rb"\d+").match(data, pos)
        if m is None:
            if pos >= len(data):
                raise TruncatedFile("header ends early")
            raise BadFormat(f"expected an integer at byte {pos}")
        fields.append(int(m.group()))
        pos = m.end()
    return fields, pos


def parse_pgm(data):
    """Decode PGM bytes (P2 or P5, maxval <= 255) into a ``uint8`` array."""
    if data[:2] not in (b"P2", b"P5"):
        raise BadFormat("not a PGM file (expected P2 or P5 magic)")
    (width, height, maxval), pos = _header_fields(data, 3)
    if width < 1 or height < 1:
        raise BadFormat(f"bad dimensions {width}x{height}")
    if maxval < 1 or maxval > 255:
        raise UnsupportedMaxval(f"maxval {maxval} not supported (must be 1..255)")
    n = width * height

    if data[:2] == b"P5":
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise TruncatedFile("missing whitespace before raster")
        raster = data[pos + 1:pos + 1 + n]
        if len(raster) < n:
            raise TruncatedFile(f"expected {n} samples, got {len(raster)}")
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n\r]*", b" ", data[pos:]).split()
        if len(body) < n:
            raise TruncatedFile(f"expected {n} samples, got {len(body)}")
        try:
            pixels = np.array([int(t) for t in body[:n]], dtype=np.int64)
        except ValueError:
            raise BadFormat("non-integer sample in P2 raster") from None

    if pixels.max() > maxval:
        raise BadFormat(f"sample exceeds maxval {maxval}")
    return pixels.astype(np.uint8).reshape(height, width)


def read_pgm(path):
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return parse_pgm(data)


def format_pgm(img, binary=True):
    img = as_gray(img)
    h, w = img.shape
    if binary:
        return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()
    lines = [b" ".join(b"%d" % v for v in row) for row in img]
    return b"P2\n%d %d\n255\n" % (w, h) + b"\n".join(lines) + b"\n"


def write_pgm(img, path, binary=True):
    data = format_pgm(img, binary)
    try:
        with open(path, "wb") as f:
            f.write(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _next_pow2(n):
    return 1 << (int(n) - 1).bit_length()


def pad_to_pow2(img):
    """Grow each side to the next power of two by repeating the last row/column.

    Returns the float64 matrix and the original ``(height, width)``.
    """
    a = np.asarray(img, dtype=np.float64)
    h, w = a.shape
    H, W = _next_pow2(h), _next_pow2(w)
    if (H, W) != (h, w):
        a = np.pad(a, ((0, H - h), (0, W - w)), mode="edge")
    return a, (h, w)


def crop_and_quantize(m, orig_dims):
    """Crop to ``orig_dims``, round half away from zero, clamp to [0, 255]."""
    h, w = orig_dims
    a = np.asarray(m, dtype=np.float64)[:h, :w]
    rounded = np.sign(a) * np.floor(np.abs(a) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)
