"""Hard, soft and universal thresholding of detail coefficients.

Averages are never touched.  Which positions count as averages depends on
the decomposition, see :func:`exempt_mask`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientCoefficients, InvalidThreshold
from .transform import TransformSpec

__all__ = [
    "ThresholdPolicy",
    "exempt_mask",
    "apply_hard",
    "apply_soft",
    "universal_epsilon",
    "apply_policy",
]

METHODS = ("none", "hard", "soft", "universal")


def exempt_mask(shape, spec=None):
    """Boolean mask of the positions that hold averages.

    Standard mode exempts element (0, 0) only; pyramid mode exempts the whole
    LL band of size ``(rows >> levels, cols >> levels)``.
    """
    spec = spec or TransformSpec()
    mask = np.zeros(shape, dtype=bool)
    if spec.mode == "pyramid":
        mask[: shape[0] >> spec.levels, : shape[1] >> spec.levels] = True
    else:
        mask[0, 0] = True
    return mask


def _prepare(c, eps, mask):
    if not eps >= 0:  # also rejects NaN
        raise InvalidThreshold(f"threshold must be >= 0, got {eps}")
    c = np.asarray(c, dtype=np.float64)
    if mask is None:
        mask = exempt_mask(c.shape)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != c.shape:
        raise ValueError(f"mask shape {mask.shape} does not match {c.shape}")
    return c, mask


def apply_hard(c, eps, mask=None):
    """Zero every non-exempt coefficient with ``|x| < eps``."""
    c, mask = _prepare(c, eps, mask)
    out = c.copy()
    out[(np.abs(c) < eps) & ~mask] = 0.0
    return out


def apply_soft(c, eps, mask=None):
    """Zero ``|x| < eps``, shrink the rest towards zero by ``eps``.

    A coefficient sitting exactly on the threshold survives hard thresholding
    but is shrunk to zero here.
    """
    c, mask = _prepare(c, eps, mask)
    shrunk = np.sign(c) * (np.abs(c) - eps)
    shrunk[np.abs(c) < eps] = 0.0
    # sign(x) * 0 can leave -0.0 behind
    shrunk[shrunk == 0] = 0.0
    return np.where(mask, c, shrunk)


def universal_epsilon(c, mask=None):
    """``sigma * sqrt(2 * log2(N))`` over the non-exempt coefficients.

    ``sigma`` is the population standard deviation and ``N`` the number of
    non-exempt coefficients.
    """
    c, mask = _prepare(c, 0.0, mask)
    details = c[~mask]
    n = details.size
    if n < 2:
        raise InsufficientCoefficients(f"need at least 2 detail coefficients, got {n}")
    if np.all(details == details[0]):
        return 0.0
    sigma = float(np.std(details))
    return sigma * math.sqrt(2.0 * math.log2(n))


@dataclass(frozen=True)
class ThresholdPolicy:
    method: str = "hard"
    epsilon: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown threshold method {self.method!r}")
        if self.method != "universal" and not self.epsilon >= 0:
            raise InvalidThreshold(f"threshold must be >= 0, got {self.epsilon}")


def apply_policy(c, policy, mask=None):
    """Threshold ``c`` according to ``policy``.

    Returns the thresholded matrix and the epsilon actually used (computed
    from the coefficients for the universal method).
    """
    if policy.method == "none":
        return np.array(c, dtype=np.float64), 0.0
    if policy.method == "universal":
        eps = universal_epsilon(c, mask)
        return apply_hard(c, eps, mask), eps
    if policy.method == "soft":
        return apply_soft(c, policy.epsilon, mask), float(policy.epsilon)
    return apply_hard(c, policy.epsilon, mask), float(policy.epsilon)
