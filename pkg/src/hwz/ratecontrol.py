"""Threshold search for a target compression ratio or a target PSNR.

Under hard thresholding the thresholded matrix only changes when epsilon
crosses the magnitude of some detail coefficient, so the search space is
the finite set ``{0} U {next_float_above(m)}`` over the distinct nonzero
detail magnitudes ``m``.  Candidate ``i > 0`` zeroes every detail whose
magnitude is ``<= m[i - 1]``.
"""

import math

import numpy as np

from .errors import InvalidTarget
from .imgio import crop_and_quantize
from .metrics import psnr_from_mse, ratio
from .pipeline import prepare, report_for
from .thresholding import apply_hard
from .transform import inverse_stack

__all__ = ["candidate_epsilons", "cr_curve", "psnr_curve", "solve_for_cr", "solve_for_psnr"]

# bytes of float64 scratch space per batched reconstruction
_BATCH_BYTES = 1 << 25


def _detail_magnitudes(prep):
    mags = np.unique(np.abs(prep.coeffs[~prep.mask]))
    return mags[mags > 0]


def candidate_epsilons(prep):
    """Sorted thresholds at which the hard-thresholded matrix changes, plus 0."""
    mags = _detail_magnitudes(prep)
    return np.concatenate(([0.0], np.nextafter(mags, np.inf)))


def cr_curve(prep):
    """Compression ratio at every candidate epsilon, without reconstructing."""
    details = np.sort(np.abs(prep.coeffs[~prep.mask]))
    details = details[details > 0]
    kept_exempt = int(np.count_nonzero(prep.coeffs[prep.mask]))
    mags = _detail_magnitudes(prep)
    surviving = details.size - np.searchsorted(details, mags, side="right")
    counts = np.concatenate(([kept_exempt + details.size], kept_exempt + surviving))
    n_img = prep.nnz_image
    return np.array([ratio(n_img, int(k)) for k in counts]), counts


def _threshold_stack(prep, eps_values):
    c = prep.coeffs
    detail_abs = np.where(prep.mask, np.inf, np.abs(c))
    zero = detail_abs[None, :, :] < np.asarray(eps_values)[:, None, None]
    return np.where(zero, 0.0, c[None, :, :])


def psnr_curve(prep, indices, eps=None):
    """PSNR after hard thresholding at ``eps[i]`` for each ``i`` in ``indices``."""
    eps = candidate_epsilons(prep) if eps is None else eps
    indices = list(indices)
    ref = prep.image.astype(np.float64)
    batch = max(1, _BATCH_BYTES // (prep.coeffs.size * 8 * 3))
    out = []
    for start in range(0, len(indices), batch):
        chunk = indices[start:start + batch]
        stack = inverse_stack(_threshold_stack(prep, eps[chunk]), prep.spec)
        for recon in stack:
            q = crop_and_quantize(recon, prep.orig_dims).astype(np.float64)
            out.append(psnr_from_mse(float(np.mean((ref - q) ** 2))))
    return out


def solve_for_cr(image, spec, target):
    """Smallest candidate epsilon whose compression ratio reaches ``target``.

    Returns ``(epsilon, report)``.  When no candidate reaches the target the
    largest candidate is returned with ``report.target_unreachable`` set.
    """
    if not (target >= 1 and math.isfinite(target)):
        raise InvalidTarget(f"target compression ratio must be >= 1, got {target}")
    prep = prepare(image, spec)
    eps = candidate_epsilons(prep)
    crs, _ = cr_curve(prep)
    hits = np.flatnonzero(crs >= target)
    idx = int(hits[0]) if hits.size else eps.size - 1
    e = float(eps[idx])
    report = report_for(prep, apply_hard(prep.coeffs, e, prep.mask))
    report.target_unreachable = hits.size == 0
    return e, report


def solve_for_psnr(image, spec, target_db, tol_db):
    """Largest candidate epsilon whose PSNR stays at or above ``target_db - tol_db``.

    PSNR is treated as nonincreasing in epsilon for a binary search.  If the
    answer's lower neighbour has a smaller PSNR than the answer itself, the
    curve is not monotone there and an exhaustive scan is used instead.
    ``report.target_unreachable`` is set when the returned PSNR lies outside
    ``[target_db - tol_db, target_db + tol_db]``.
    """
    if not target_db > 0:
        raise InvalidTarget(f"target PSNR must be > 0, got {target_db}")
    if not (tol_db > 0 and math.isfinite(tol_db)):
        raise InvalidTarget(f"tolerance must be a positive finite number, got {tol_db}")
    prep = prepare(image, spec)
    eps = candidate_epsilons(prep)
    floor_db = target_db - tol_db
    cache = {0: math.inf}

    def at(i):
        if i not in cache:
            cache[i] = psnr_curve(prep, [i], eps)[0]
        return cache[i]

    lo, hi = 0, eps.size
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if at(mid) >= floor_db:
            lo = mid
        else:
            hi = mid
    if lo > 0 and at(lo - 1) < at(lo):
        lo = _scan(prep, eps, floor_db)

    e = float(eps[lo])
    report = report_for(prep, apply_hard(prep.coeffs, e, prep.mask))
    report.target_unreachable = not floor_db <= report.psnr_db <= target_db + tol_db
    return e, report


def _scan(prep, eps, floor_db):
    """Largest index whose PSNR is >= ``floor_db``, by exhaustive evaluation."""
    psnrs = psnr_curve(prep, range(eps.size), eps)
    good = [i for i, p in enumerate(psnrs) if p >= floor_db]
    return good[-1]
