"""Image-level compression pipeline.

pad -> forward transform -> threshold -> sparse/encode, and back again.
"""

from dataclasses import dataclass

import numpy as np

from . import codec
from .imgio import as_gray, crop_and_quantize, pad_to_pow2
from .metrics import MetricsReport, energy_retained, mse, nnz, psnr_from_mse, ratio
from .thresholding import ThresholdPolicy, apply_policy, exempt_mask
from .transform import TransformSpec, forward, inverse

__all__ = [
    "Prepared",
    "prepare",
    "reconstruct",
    "report_for",
    "evaluate",
    "compress_image",
    "encode_thresholded",
    "decompress_bytes",
]


@dataclass
class Prepared:
    """An image together with its forward transform, ready for thresholding."""

    image: np.ndarray
    spec: TransformSpec
    coeffs: np.ndarray
    mask: np.ndarray
    orig_dims: tuple

    @property
    def nnz_image(self):
        return nnz(self.image)


def prepare(image, spec=None):
    image = as_gray(image)
    spec = spec or TransformSpec()
    padded, dims = pad_to_pow2(image)
    spec.check(padded.shape)
    coeffs = forward(padded, spec)
    return Prepared(image, spec, coeffs, exempt_mask(coeffs.shape, spec), dims)


def reconstruct(coeffs, spec, orig_dims):
    return crop_and_quantize(inverse(coeffs, spec), orig_dims)


def report_for(prep, thresholded, recon=None):
    """Metrics comparing the original image with the decode of ``thresholded``."""
    if recon is None:
        recon = reconstruct(thresholded, prep.spec, prep.orig_dims)
    err = mse(prep.image, recon)
    ref = prep.image.astype(np.float64)
    if np.any(ref):
        energy = energy_retained(ref, recon)
    else:
        energy = 100.0 if not np.any(recon) else float("inf")
    n_orig, n_thr = prep.nnz_image, nnz(thresholded)
    return MetricsReport(
        cr=ratio(n_orig, n_thr),
        mse=err,
        psnr_db=psnr_from_mse(err),
        energy_retained_pct=energy,
        nnz_original=n_orig,
        nnz_thresholded=n_thr,
    )


def evaluate(image, spec=None, policy=None):
    """Threshold an image's transform and measure the result.

    Returns ``(thresholded_coeffs, epsilon_used, report)``.
    """
    prep = image if isinstance(image, Prepared) else prepare(image, spec)
    policy = policy or ThresholdPolicy("none")
    thresholded, eps = apply_policy(prep.coeffs, policy, prep.mask)
    return thresholded, eps, report_for(prep, thresholded)


def _header(prep, method, eps):
    h, w = prep.orig_dims
    ph, pw = prep.coeffs.shape
    return codec.CompressedHeader(
        mode=prep.spec.mode,
        levels=prep.spec.levels if prep.spec.mode == "pyramid" else 0,
        threshold_method=method,
        epsilon=float(eps),
        orig_width=w,
        orig_height=h,
        padded_width=pw,
        padded_height=ph,
    )


def compress_image(image, spec=None, policy=None):
    """Compress an 8-bit image to HWZ1 bytes.

    Returns ``(data, epsilon_used, report)``.
    """
    prep = image if isinstance(image, Prepared) else prepare(image, spec)
    policy = policy or ThresholdPolicy("none")
    thresholded, eps, report = evaluate(prep, policy=policy)
    return encode_thresholded(prep, thresholded, policy.method, eps), eps, report


def encode_thresholded(prep, thresholded, method, eps):
    return codec.encode(_header(prep, method, eps), codec.to_sparse(thresholded))


def decompress_bytes(data):
    """Decode HWZ1 bytes back to an 8-bit image; also returns the header."""
    header, sparse = codec.decode(data)
    spec = TransformSpec(header.mode, header.levels if header.mode == "pyramid" else 1)
    coeffs = codec.from_sparse(sparse)
    return reconstruct(coeffs, spec, (header.orig_height, header.orig_width)), header
