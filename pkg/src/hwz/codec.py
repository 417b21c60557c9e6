"""Sparse coordinate-list storage of coefficient matrices and the HWZ1 file format.

Layout (little-endian, 34-byte header followed by 16-byte records)::

    offset  size  field
    0       4     magic "HWZ1"
    4       1     version (1)
    5       1     bit 7: mode (0 standard, 1 pyramid)
                  bits 5-6: threshold method (0 none, 1 hard, 2 soft, 3 universal)
                  bits 0-4: levels
    6       8     f64 epsilon
    14      4     u32 orig_width
    18      4     u32 orig_height
    22      4     u32 padded_width
    26      4     u32 padded_height
    30      4     u32 entry_count
    34      16*n  (u32 row, u32 col, f64 value) per entry, sorted by (row, col)
"""

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagic,
    HeaderMismatch,
    MalformedHeader,
    MalformedSparse,
    TruncatedPayload,
    UnsupportedVersion,
)
from .transform import is_pow2, max_levels

__all__ = [
    "SparseCoeffs",
    "CompressedHeader",
    "to_sparse",
    "from_sparse",
    "encode",
    "decode",
    "encoded_size",
    "MAGIC",
    "HEADER_SIZE",
    "RECORD_SIZE",
]

MAGIC = b"HWZ1"
VERSION = 1
_HEADER = struct.Struct("<4sBBdIIIII")
HEADER_SIZE = _HEADER.size
_RECORD = np.dtype([("row", "<u4"), ("col", "<u4"), ("value", "<f8")])
RECORD_SIZE = _RECORD.itemsize

MODE_CODES = {"standard": 0, "pyramid": 1}
METHOD_CODES = {"none": 0, "hard": 1, "soft": 2, "universal": 3}
_MODES = {v: k for k, v in MODE_CODES.items()}
_METHODS = {v: k for k, v in METHOD_CODES.items()}
_MAX_LEVELS = 0x1F
_U32_MAX = 0xFFFFFFFF


def encoded_size(entry_count):
    return HEADER_SIZE + RECORD_SIZE * entry_count


@dataclass(eq=False)
class SparseCoeffs:
    """Nonzero entries of a ``padded_rows x padded_cols`` matrix in row-major order."""

    padded_rows: int
    padded_cols: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.int64).reshape(-1)
        self.cols = np.asarray(self.cols, dtype=np.int64).reshape(-1)
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)

    @classmethod
    def from_entries(cls, padded_rows, padded_cols, entries):
        entries = list(entries)
        if not entries:
            return cls(padded_rows, padded_cols, [], [], [])
        r, c, v = zip(*entries)
        return cls(padded_rows, padded_cols, r, c, v)

    @property
    def entries(self):
        return [(int(r), int(c), float(v)) for r, c, v in zip(self.rows, self.cols, self.values)]

    def __len__(self):
        return int(self.values.size)

    def __eq__(self, other):
        if not isinstance(other, SparseCoeffs):
            return NotImplemented
        return (
            self.padded_rows == other.padded_rows
            and self.padded_cols == other.padded_cols
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.values.view(np.uint64), other.values.view(np.uint64))
        )

    def validate(self):
        """Raise :class:`MalformedSparse` unless every invariant holds."""
        if not (is_pow2(self.padded_rows) and is_pow2(self.padded_cols)):
            raise MalformedSparse(f"dimensions must be powers of two, got {self.padded_rows}x{self.padded_cols}")
        if not (self.rows.size == self.cols.size == self.values.size):
            raise MalformedSparse("row, col and value arrays differ in length")
        if self.values.size == 0:
            return
        if self.rows.min() < 0 or self.rows.max() >= self.padded_rows:
            raise MalformedSparse("row index out of bounds")
        if self.cols.min() < 0 or self.cols.max() >= self.padded_cols:
            raise MalformedSparse("column index out of bounds")
        if np.any(self.values == 0) or not np.all(np.isfinite(self.values)):
            raise MalformedSparse("values must be finite and nonzero")
        flat = self.rows * self.padded_cols + self.cols
        step = np.diff(flat)
        if np.any(step == 0):
            raise MalformedSparse("duplicate position")
        if np.any(step < 0):
            raise MalformedSparse("entries are not sorted by (row, col)")


@dataclass(frozen=True)
class CompressedHeader:
    mode: str
    levels: int
    threshold_method: str
    epsilon: float
    orig_width: int
    orig_height: int
    padded_width: int
    padded_height: int
    format_version: int = VERSION

    def problems(self):
        """List of invariant violations; empty when the header is consistent."""
        out = []
        if self.format_version != VERSION:
            out.append(f"unsupported format version {self.format_version}")
        if self.mode not in MODE_CODES:
            out.append(f"unknown mode {self.mode!r}")
        if self.threshold_method not in METHOD_CODES:
            out.append(f"unknown threshold method {self.threshold_method!r}")
        if not (isinstance(self.epsilon, (int, float)) and math.isfinite(self.epsilon) and self.epsilon >= 0):
            out.append(f"epsilon must be finite and >= 0, got {self.epsilon}")
        dims = (self.orig_width, self.orig_height, self.padded_width, self.padded_height)
        if any(not 1 <= d <= _U32_MAX for d in dims):
            out.append(f"dimensions out of range: {dims}")
            return out
        if not (is_pow2(self.padded_width) and is_pow2(self.padded_height)):
            out.append("padded dimensions must be powers of two")
        if self.padded_width < self.orig_width or self.padded_height < self.orig_height:
            out.append("padded dimensions smaller than original")
        if not 0 <= self.levels <= _MAX_LEVELS:
            out.append(f"levels out of range: {self.levels}")
        elif self.mode == "pyramid":
            deepest = max_levels((self.padded_height, self.padded_width))
            if not 1 <= self.levels <= deepest:
                out.append(f"pyramid levels must be in [1, {deepest}], got {self.levels}")
        return out


def to_sparse(c):
    """Coordinate list of the nonzero entries of ``c``."""
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 2:
        raise ValueError(f"expected a 2D matrix, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    r, k = np.nonzero(c)
    return SparseCoeffs(c.shape[0], c.shape[1], r, k, c[r, k])


def from_sparse(s):
    s.validate()
    out = np.zeros((s.padded_rows, s.padded_cols), dtype=np.float64)
    out[s.rows, s.cols] = s.values
    return out


def encode(header, s):
    """Serialize ``header`` and ``s`` to HWZ1 bytes."""
    bad = header.problems()
    if bad:
        raise HeaderMismatch("; ".join(bad))
    if (header.padded_height, header.padded_width) != (s.padded_rows, s.padded_cols):
        raise HeaderMismatch(
            f"header says {header.padded_height}x{header.padded_width}, "
            f"coefficients are {s.padded_rows}x{s.padded_cols}"
        )
    s.validate()
    packed = (MODE_CODES[header.mode] << 7) | (METHOD_CODES[header.threshold_method] << 5) | header.levels
    head = _HEADER.pack(
        MAGIC,
        header.format_version,
        packed,
        float(header.epsilon),
        header.orig_width,
        header.orig_height,
        header.padded_width,
        header.padded_height,
        len(s),
    )
    records = np.empty(len(s), dtype=_RECORD)
    records["row"] = s.rows
    records["col"] = s.cols
    records["value"] = s.values
    return head + records.tobytes()


def decode(data):
    """Parse HWZ1 bytes into ``(CompressedHeader, SparseCoeffs)``."""
    data = bytes(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic("not an HWZ1 stream")
    if len(data) < HEADER_SIZE:
        raise TruncatedPayload(f"header needs {HEADER_SIZE} bytes, got {len(data)}")
    magic, version, packed, eps, ow, oh, pw, ph, count = _HEADER.unpack_from(data)
    if version != VERSION:
        raise UnsupportedVersion(f"format version {version} is not supported")
    header = CompressedHeader(
        mode=_MODES[packed >> 7],
        levels=packed & _MAX_LEVELS,
        threshold_method=_METHODS[(packed >> 5) & 0x3],
        epsilon=eps,
        orig_width=ow,
        orig_height=oh,
        padded_width=pw,
        padded_height=ph,
        format_version=version,
    )
    bad = header.problems()
    if bad:
        raise MalformedHeader("; ".join(bad))
    expected = encoded_size(count)
    if len(data) < expected:
        raise TruncatedPayload(f"expected {expected} bytes for {count} entries, got {len(data)}")
    if len(data) > expected:
        raise MalformedSparse(f"{len(data) - expected} trailing bytes after {count} entries")
    records = np.frombuffer(data, dtype=_RECORD, count=count, offset=HEADER_SIZE)
    s = SparseCoeffs(ph, pw, records["row"], records["col"], records["value"])
    s.validate()
    return header, s
