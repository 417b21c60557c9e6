"""Haar averaging/differencing transforms.

One pass over a vector of width ``w`` replaces ``x[:w]`` with the pair
averages ``(x[2k] + x[2k+1]) / 2`` followed by the details
``x[2k] - average``.  The transform is left unnormalized, so every value
produced from integer input is a dyadic rational and the round trip is
exact in float64.

Two 2D layouts are provided:

* ``standard``: the full 1D transform on every row, then the full 1D
  transform on every column.  Only element (0, 0) is an average.
* ``pyramid``: one row pass and one column pass per level, recursing into
  the top-left (LL) quadrant only.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidLength, InvalidShape, LevelTooDeep

__all__ = [
    "TransformSpec",
    "forward1d",
    "inverse1d",
    "forward2d_standard",
    "inverse2d_standard",
    "forward2d_pyramid",
    "inverse2d_pyramid",
    "forward",
    "inverse",
    "max_levels",
    "is_pow2",
]

MODES = ("standard", "pyramid")


def is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


def max_levels(shape):
    """Deepest pyramid decomposition allowed for a matrix of ``shape``."""
    return int(min(shape)).bit_length() - 1


@dataclass(frozen=True)
class TransformSpec:
    """Decomposition mode plus level count (levels only matter for pyramid)."""

    mode: str = "standard"
    levels: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown transform mode {self.mode!r}")
        if self.mode == "pyramid" and self.levels < 1:
            raise LevelTooDeep(f"pyramid levels must be >= 1, got {self.levels}")

    def check(self, shape):
        """Raise if this spec cannot be applied to a matrix of ``shape``."""
        _check_shape(shape)
        if self.mode == "pyramid":
            _check_levels(shape, self.levels)


# -- single passes along the last axis, in place --------------------------


def _analysis_pass(x, w):
    even = x[..., 0:w:2]
    odd = x[..., 1:w:2]
    avg = (even + odd) / 2
    det = even - avg
    h = w // 2
    x[..., :h] = avg
    x[..., h:w] = det


def _synthesis_pass(x, w):
    h = w // 2
    avg = x[..., :h].copy()
    det = x[..., h:w].copy()
    x[..., 0:w:2] = avg + det
    x[..., 1:w:2] = avg - det


def _full_analysis(x):
    w = x.shape[-1]
    while w > 1:
        _analysis_pass(x, w)
        w //= 2


def _full_synthesis(x):
    n = x.shape[-1]
    w = 2
    while w <= n:
        _synthesis_pass(x, w)
        w *= 2


# -- validation ------------------------------------------------------------


def _as_float_copy(a):
    arr = np.array(a, dtype=np.float64, copy=True)
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients must be finite")
    return arr


def _check_shape(shape):
    if len(shape) != 2 or not (is_pow2(shape[0]) and is_pow2(shape[1])):
        raise InvalidShape(f"expected a 2D matrix with power-of-two sides, got {tuple(shape)}")


def _check_levels(shape, levels):
    deepest = max_levels(shape)
    if levels < 1 or levels > deepest:
        raise LevelTooDeep(f"levels must be in [1, {deepest}] for shape {tuple(shape)}, got {levels}")


# -- 1D --------------------------------------------------------------------


def forward1d(v):
    """Full Haar decomposition of a vector whose length is a power of two.

    >>> forward1d([9, 7, 3, 5]).tolist()
    [6.0, 2.0, 1.0, -1.0]
    """
    x = _as_float_copy(v)
    if x.ndim != 1 or not is_pow2(x.size):
        raise InvalidLength(f"length must be a power of two, got {x.size}")
    _full_analysis(x)
    return x


def inverse1d(v):
    """Undo :func:`forward1d`, coarsest level first."""
    x = _as_float_copy(v)
    if x.ndim != 1 or not is_pow2(x.size):
        raise InvalidLength(f"length must be a power of two, got {x.size}")
    _full_synthesis(x)
    return x


# -- 2D, standard ----------------------------------------------------------


def _standard_forward_inplace(x):
    _full_analysis(x)
    _full_analysis(np.swapaxes(x, -1, -2))


def _standard_inverse_inplace(x):
    _full_synthesis(np.swapaxes(x, -1, -2))
    _full_synthesis(x)


def forward2d_standard(m):
    """Full row transform followed by the full column transform."""
    x = _as_float_copy(m)
    _check_shape(x.shape)
    _standard_forward_inplace(x)
    return x


def inverse2d_standard(m):
    x = _as_float_copy(m)
    _check_shape(x.shape)
    _standard_inverse_inplace(x)
    return x


# -- 2D, pyramid -----------------------------------------------------------


def _pyramid_forward_inplace(x, levels):
    rows, cols = x.shape[-2:]
    for lvl in range(levels):
        r, c = rows >> lvl, cols >> lvl
        block = x[..., :r, :c]
        _analysis_pass(block, c)
        _analysis_pass(np.swapaxes(block, -1, -2), r)


def _pyramid_inverse_inplace(x, levels):
    rows, cols = x.shape[-2:]
    for lvl in reversed(range(levels)):
        r, c = rows >> lvl, cols >> lvl
        block = x[..., :r, :c]
        _synthesis_pass(np.swapaxes(block, -1, -2), r)
        _synthesis_pass(block, c)


def forward2d_pyramid(m, levels):
    """Mallat-style decomposition: ``levels`` row+column passes on the LL band.

    Parameters
    ----------
    m : array_like
        Matrix with power-of-two sides.
    levels : int
        Number of decomposition stages, ``1 <= levels <= log2(min(shape))``.

    Returns
    -------
    numpy.ndarray
        Coefficients laid out as nested LL/HL/LH/HH subbands.
    """
    x = _as_float_copy(m)
    _check_shape(x.shape)
    _check_levels(x.shape, levels)
    _pyramid_forward_inplace(x, levels)
    return x


def inverse2d_pyramid(m, levels):
    x = _as_float_copy(m)
    _check_shape(x.shape)
    _check_levels(x.shape, levels)
    _pyramid_inverse_inplace(x, levels)
    return x


# -- dispatch --------------------------------------------------------------


def forward(m, spec):
    """Apply the forward transform selected by ``spec`` (a :class:`TransformSpec`)."""
    if spec.mode == "standard":
        return forward2d_standard(m)
    return forward2d_pyramid(m, spec.levels)


def inverse(m, spec):
    if spec.mode == "standard":
        return inverse2d_standard(m)
    return inverse2d_pyramid(m, spec.levels)


def inverse_stack(stack, spec):
    """Inverse transform of every matrix in a ``(k, rows, cols)`` stack at once."""
    x = np.array(stack, dtype=np.float64, copy=True)
    spec.check(x.shape[-2:])
    if spec.mode == "standard":
        _standard_inverse_inplace(x)
    else:
        _pyramid_inverse_inplace(x, spec.levels)
    return x
