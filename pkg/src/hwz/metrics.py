"""Objective quality and compression measures."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateReference, ShapeMismatch

__all__ = [
    "MetricsReport",
    "nnz",
    "ratio",
    "compression_ratio",
    "mse",
    "psnr",
    "energy_retained",
    "fmt_value",
]

INF = math.inf


def fmt_value(x):
    """Render a float for reports; infinities become ``"inf"``."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x) if isinstance(x, float) else str(x)


@dataclass
class MetricsReport:
    cr: float
    mse: float
    psnr_db: float
    energy_retained_pct: float
    nnz_original: int
    nnz_thresholded: int
    target_unreachable: bool = False

    def as_dict(self):
        return {k: fmt_value(v) if isinstance(v, float) else v for k, v in asdict(self).items()}


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


def nnz(m):
    """Count of entries that are not exactly zero."""
    return int(np.count_nonzero(np.asarray(m)))


def ratio(nnz_original, nnz_thresholded):
    if nnz_original == 0:
        return 0.0
    if nnz_thresholded == 0:
        return INF
    return nnz_original / nnz_thresholded


def compression_ratio(original, thresholded):
    """Nonzeros in ``original`` divided by nonzeros in ``thresholded``.

    Returns ``inf`` when the thresholded matrix is entirely zero and ``0.0``
    when the original is.
    """
    a, b = _pair(original, thresholded)
    return ratio(nnz(a), nnz(b))


def mse(a, b):
    a, b = _pair(a, b)
    d = a - b
    return float(np.mean(d * d))


def psnr_from_mse(err):
    if err == 0:
        return INF
    return 20.0 * math.log10(255.0 / math.sqrt(err))


def psnr(a, b):
    """Peak signal-to-noise ratio in dB for 8-bit images; ``inf`` if identical."""
    return psnr_from_mse(mse(a, b))


def energy_retained(a, b):
    """Percentage of the squared-sum energy of ``a`` still present in ``b``."""
    a, b = _pair(a, b)
    ref = float(np.sum(a * a))
    if ref == 0:
        raise DegenerateReference("reference image is all zeros")
    return 100.0 * float(np.sum(b * b)) / ref
