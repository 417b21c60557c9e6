"""Grayscale image compression with the unnormalized Haar transform."""

from .codec import CompressedHeader, SparseCoeffs, decode, encode, from_sparse, to_sparse
from .metrics import MetricsReport, compression_ratio, energy_retained, mse, psnr
from .pipeline import compress_image, decompress_bytes, evaluate
from .ratecontrol import solve_for_cr, solve_for_psnr
from .thresholding import ThresholdPolicy, apply_hard, apply_soft, exempt_mask, universal_epsilon
from .transform import (
    TransformSpec,
    forward,
    forward1d,
    forward2d_pyramid,
    forward2d_standard,
    inverse,
    inverse1d,
    inverse2d_pyramid,
    inverse2d_standard,
)

__version__ = "0.1.0"
