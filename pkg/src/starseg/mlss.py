"""Multi-level starlet segmentation (MLSS).

For a level range ``L0..L`` the raw segmentation at level ``i`` is the
running sum of detail planes ``w_L0 + ... + w_i``. In original mode the
input image is subtracted from each sum; derivative mode keeps the sum as
is, which preserves small bright structure. Each raw plane becomes a mask
by strict thresholding.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .wavelet import as_gray_image

__all__ = ["LevelRange", "MlssMode", "SegmentationStack", "binarize", "mlss"]


class MlssMode(str, Enum):
    ORIGINAL = "original"
    DERIVATIVE = "derivative"


@dataclass(frozen=True)
class LevelRange:
    """Inclusive range of starlet levels ``first..last``."""

    first: int = 1
    last: int = 5

    def __post_init__(self):
        for name in ("first", "last"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValueError(f"{name} level must be an integer, got {value!r}")
        if self.first < 1:
            raise ValueError(f"first level must be >= 1, got {self.first}")
        if self.last < self.first:
            raise ValueError(
                f"first level ({self.first}) must not exceed last level ({self.last})")

    def __iter__(self):
        return iter(range(self.first, self.last + 1))

    def __len__(self):
        return self.last - self.first + 1


@dataclass(frozen=True)
class SegmentationStack:
    """Raw MLSS planes and their masks for every level in ``levels``.

    ``raw[n]`` and ``masks[n]`` belong to starlet level ``levels.first + n``;
    use :meth:`raw_at` / :meth:`mask_at` for absolute level indexing.
    """

    mode: MlssMode
    levels: LevelRange
    raw: np.ndarray
    masks: np.ndarray
    threshold: float = 0.0

    def raw_at(self, level):
        return self.raw[self._index(level)]

    def mask_at(self, level):
        return self.masks[self._index(level)]

    def _index(self, level):
        if level not in range(self.levels.first, self.levels.last + 1):
            raise IndexError(
                f"level {level} outside {self.levels.first}..{self.levels.last}")
        return level - self.levels.first


def binarize(plane, threshold=0.0):
    """ROI where ``plane > threshold`` (strict)."""
    return np.asarray(plane) > threshold


def mlss(image, decomposition, levels=None, mode=MlssMode.ORIGINAL, threshold=0.0):
    """Build the MLSS stack from a starlet decomposition.

    Parameters
    ----------
    image : array_like, 2D
        The decomposed input ``c_0``.
    decomposition : StarletDecomposition
    levels : LevelRange, optional
        Defaults to ``1..decomposition.levels``. Levels below ``first`` are
        ignored entirely.
    mode : MlssMode or str
        ``"original"`` subtracts ``c_0`` from each accumulated sum.
    threshold : float
        Binarization threshold for the masks.

    Returns
    -------
    SegmentationStack
    """
    mode = MlssMode(mode)
    image = as_gray_image(image)
    if levels is None:
        levels = LevelRange(1, decomposition.levels)
    if levels.last > decomposition.levels:
        raise ValueError(
            f"last level {levels.last} exceeds decomposition depth {decomposition.levels}")
    if image.shape != decomposition.shape:
        raise ValueError(
            f"image shape {image.shape} does not match decomposition {decomposition.shape}")

    raw = np.empty((len(levels),) + image.shape, dtype=np.float64)
    acc = np.zeros(image.shape, dtype=np.float64)
    for n, level in enumerate(levels):
        acc = acc + decomposition.detail(level)
        raw[n] = acc - image if mode is MlssMode.ORIGINAL else acc
    return SegmentationStack(
        mode=mode,
        levels=levels,
        raw=raw,
        masks=binarize(raw, threshold),
        threshold=float(threshold),
    )
