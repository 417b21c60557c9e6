"""Independent reference computations used by the tests.

Everything here is plain Python on lists of floats, written pass by pass
without numpy, so it shares no code path with the package.
"""

import math


def pair_pass(seq, width):
    """One averaging/differencing pass over seq[:width]; returns a new list."""
    out = list(seq)
    half = width // 2
    for k in range(half):
        a, b = seq[2 * k], seq[2 * k + 1]
        avg = (a + b) / 2
        out[k] = avg
        out[half + k] = a - avg
    return out


def full_1d(seq):
    seq = [float(v) for v in seq]
    w = len(seq)
    while w > 1:
        seq = pair_pass(seq, w)
        w //= 2
    return seq


def _column(m, j, height):
    return [m[i][j] for i in range(height)]


def _set_column(m, j, values):
    for i, v in enumerate(values):
        m[i][j] = v


def standard_2d(matrix):
    """Rows fully transformed, then columns fully transformed."""
    m = [[float(v) for v in row] for row in matrix]
    rows, cols = len(m), len(m[0])
    for i in range(rows):
        m[i] = full_1d(m[i])
    for j in range(cols):
        col = full_1d(_column(m, j, rows))
        _set_column(m, j, col)
    return m


def pyramid_2d(matrix, levels):
    """One row pass and one column pass per level on the shrinking LL block."""
    m = [[float(v) for v in row] for row in matrix]
    r, c = len(m), len(m[0])
    for _ in range(levels):
        for i in range(r):
            m[i][:c] = pair_pass(m[i][:c], c)
        for j in range(c):
            _set_column(m, j, pair_pass(_column(m, j, r), r))
        r //= 2
        c //= 2
    return m


def two_pass_universal(values):
    """sigma * sqrt(2 * log2 N), population sigma, mean then squared deviations."""
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / n
    return math.sqrt(var) * math.sqrt(2 * math.log2(n))


def count_nonzero(matrix):
    return sum(1 for row in matrix for v in row if v != 0)


def sweep_candidates(coeffs, mask):
    """Every threshold at which hard thresholding changes the matrix, plus 0."""
    import numpy as np

    mags = sorted({abs(float(v)) for v in coeffs[~mask] if v != 0})
    return [0.0] + [float(np.nextafter(m, np.inf)) for m in mags]


def sweep_nnz(coeffs, mask, eps):
    import numpy as np

    keep = mask | (np.abs(coeffs) >= eps)
    return int(np.count_nonzero(coeffs[keep]))


def sweep_psnr(image, coeffs, mask, eps, spec):
    """Hard threshold, inverse, crop, round, clamp, then PSNR, one candidate at a time."""
    import numpy as np

    from hwz.transform import inverse

    t = coeffs.copy()
    t[~mask & (np.abs(coeffs) < eps)] = 0.0
    rec = inverse(t, spec)[: image.shape[0], : image.shape[1]]
    q = np.clip(np.sign(rec) * np.floor(np.abs(rec) + 0.5), 0, 255)
    err = float(np.mean((image.astype(float) - q) ** 2))
    return math.inf if err == 0 else 20 * math.log10(255 / math.sqrt(err))
