"""Starlet (isotropic undecimated B3-spline) wavelet transform.

The decomposition follows the à trous scheme::

    c_j = c_{j-1} * h_j
    w_j = c_{j-1} - c_j

where ``h_j`` is the separable B3-spline kernel whose taps sit ``2**(j-1)``
pixels apart. Borders use mirror extension that does not repeat the edge
pixel (``... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...``).
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "StarletDecomposition",
    "as_gray_image",
    "b3_spline_kernel_1d",
    "dilated_smooth",
    "highpass_kernel_2d",
    "reconstruct",
    "smoothing_kernel_2d",
    "starlet_decompose",
]

_B3_TAPS = (1 / 16, 4 / 16, 6 / 16, 4 / 16, 1 / 16)


def b3_spline_kernel_1d():
    """The five B3-spline taps ``[1, 4, 6, 4, 1] / 16``."""
    return np.array(_B3_TAPS, dtype=np.float64)


def smoothing_kernel_2d():
    """5x5 low-pass kernel ``h[k, l] = h1d[k] * h1d[l]``."""
    taps = b3_spline_kernel_1d()
    return np.outer(taps, taps)


def highpass_kernel_2d():
    """5x5 high-pass kernel ``g = delta - h``.

    The transform itself never convolves with ``g``; detail planes are
    computed by subtraction. This exists for checking the filter pair.
    """
    g = -smoothing_kernel_2d()
    g[2, 2] += 1.0
    return g


def as_gray_image(image, name="image"):
    """Validate and convert to a 2D float64 array with finite values."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _smooth_axis(data, step, axis):
    pad = 2 * step
    n = data.shape[axis]
    widths = [(0, 0), (0, 0)]
    widths[axis] = (pad, pad)
    # numpy's "reflect" is the edge-not-repeated mirror, applied periodically
    # when the pad exceeds the axis length; a single sample just repeats.
    padded = np.pad(data, widths, mode="reflect" if n > 1 else "edge")
    out = np.zeros_like(data)
    for k, tap in enumerate(_B3_TAPS):
        start = k * step
        window = [slice(None), slice(None)]
        window[axis] = slice(start, start + n)
        out += tap * padded[tuple(window)]
    return out


def dilated_smooth(image, level):
    """Smooth ``image`` with the B3-spline kernel dilated for ``level``.

    Parameters
    ----------
    image : array_like, 2D
        Input plane.
    level : int
        Starlet level ``j >= 1``. Adjacent taps are ``2**(j-1)`` pixels
        apart, so level 1 uses offsets -2..2 and level 2 uses
        {-4, -2, 0, 2, 4}.

    Returns
    -------
    ndarray of float64
        Same shape as ``image``.
    """
    if int(level) != level or level < 1:
        raise ValueError(f"level must be a positive integer, got {level!r}")
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"image must be a non-empty 2D array, got shape {arr.shape}")
    step = 2 ** (int(level) - 1)
    return _smooth_axis(_smooth_axis(arr, step, axis=0), step, axis=1)


@dataclass(frozen=True)
class StarletDecomposition:
    """Detail planes ``w_1..w_L`` and the smooth residual ``c_L``.

    Attributes
    ----------
    details : ndarray, shape (L, H, W)
        ``details[j - 1]`` is ``w_j``.
    residual : ndarray, shape (H, W)
    """

    details: np.ndarray
    residual: np.ndarray

    @property
    def levels(self):
        return self.details.shape[0]

    @property
    def shape(self):
        return self.residual.shape

    def detail(self, level):
        """``w_level`` using 1-based starlet indexing."""
        if not 1 <= level <= self.levels:
            raise IndexError(f"level {level} outside 1..{self.levels}")
        return self.details[level - 1]


def starlet_decompose(image, last_level):
    """Starlet decomposition of ``image`` up to ``last_level``.

    Examples
    --------
    >>> dec = starlet_decompose(np.full((8, 8), 0.5), 3)
    >>> float(abs(dec.details).max()), float(dec.residual[0, 0])
    (0.0, 0.5)
    """
    if int(last_level) != last_level or last_level < 1:
        raise ValueError(f"last_level must be a positive integer, got {last_level!r}")
    c = as_gray_image(image)
    details = np.empty((int(last_level),) + c.shape, dtype=np.float64)
    for j in range(1, int(last_level) + 1):
        smoother = dilated_smooth(c, j)
        details[j - 1] = c - smoother
        c = smoother
    return StarletDecomposition(details=details, residual=c)


def reconstruct(decomposition):
    """Inverse transform: ``c_L + sum_j w_j``."""
    return decomposition.residual + decomposition.details.sum(axis=0)
