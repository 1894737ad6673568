"""Synthetic photomicrograph analogues with exact ground truth.

Two regimes are provided: ``blobs`` (filled bright disks, large ROI) and
``tracks`` (thin bright line segments, small ROI). The ground truth is the
noise-free shape mask; noise and blur touch the image only.

Randomness comes from ``numpy.random.Generator(PCG64(seed))`` and every draw
happens in a fixed order, so a seed reproduces the same bytes everywhere.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "FixtureKind",
    "FixtureSpec",
    "PlacementError",
    "disk_offsets",
    "generate",
]

MAX_PLACEMENT_TRIES = 1000


class PlacementError(RuntimeError):
    """Shapes could not be placed on the canvas within the retry budget."""


class FixtureKind(str, Enum):
    BLOBS = "blobs"
    TRACKS = "tracks"


@dataclass(frozen=True)
class FixtureSpec:
    """Parameters of a synthetic fixture.

    ``size`` is the disk radius for blobs and the line thickness for tracks.
    """

    kind: FixtureKind = FixtureKind.BLOBS
    width: int = 256
    height: int = 256
    count: int = 5
    size: float = 8
    foreground: float = 0.9
    background: float = 0.1
    noise_sigma: float = 0.05
    blur: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", FixtureKind(self.kind))
        if self.width < 1 or self.height < 1:
            raise ValueError("canvas dimensions must be positive")
        if self.count < 0:
            raise ValueError("count must be non-negative")
        if self.size <= 0:
            raise ValueError("radius/thickness must be positive")
        if not 0.0 <= self.background < self.foreground <= 1.0:
            raise ValueError("need 0 <= background < foreground <= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


def disk_offsets(radius):
    """Integer offsets ``(dy, dx)`` with ``dx**2 + dy**2 <= radius**2``."""
    r = int(np.floor(radius))
    dy, dx = np.mgrid[-r:r + 1, -r:r + 1]
    inside = dx * dx + dy * dy <= radius * radius
    return dy[inside], dx[inside]


def _place_blobs(spec, rng):
    r = int(np.floor(spec.size))
    lo_y, hi_y = r, spec.height - 1 - r
    lo_x, hi_x = r, spec.width - 1 - r
    if spec.count and (hi_y < lo_y or hi_x < lo_x):
        raise PlacementError(
            f"radius {spec.size} does not fit a {spec.width}x{spec.height} canvas")
    # disks within 2r + sqrt(2) of each other can share an 8-neighbour edge
    min_dist2 = (2 * spec.size + 2) ** 2
    centers = []
    for _ in range(spec.count):
        for _ in range(MAX_PLACEMENT_TRIES):
            cy = int(rng.integers(lo_y, hi_y + 1))
            cx = int(rng.integers(lo_x, hi_x + 1))
            if all((cy - y) ** 2 + (cx - x) ** 2 > min_dist2 for y, x in centers):
                centers.append((cy, cx))
                break
        else:
            raise PlacementError(
                f"could not place {spec.count} non-overlapping disks of radius "
                f"{spec.size} after {MAX_PLACEMENT_TRIES} tries per disk")

    mask = np.zeros((spec.height, spec.width), dtype=bool)
    dy, dx = disk_offsets(spec.size)
    for cy, cx in centers:
        mask[cy + dy, cx + dx] = True
    return mask


def _segment_mask(shape, p0, p1, half_width):
    """Pixels whose center lies within ``half_width`` of segment p0-p1."""
    yy, xx = np.indices(shape, dtype=np.float64)
    (y0, x0), (y1, x1) = p0, p1
    vy, vx = y1 - y0, x1 - x0
    length2 = vy * vy + vx * vx
    t = ((yy - y0) * vy + (xx - x0) * vx) / length2
    t = np.clip(t, 0.0, 1.0)
    dist2 = (yy - (y0 + t * vy)) ** 2 + (xx - (x0 + t * vx)) ** 2
    return dist2 <= half_width * half_width


def _place_tracks(spec, rng):
    half = spec.size / 2.0
    short_side = min(spec.width, spec.height)
    min_len, max_len = 0.15 * short_side, 0.4 * short_side
    mask = np.zeros((spec.height, spec.width), dtype=bool)
    for _ in range(spec.count):
        for _ in range(MAX_PLACEMENT_TRIES):
            angle = rng.uniform(0.0, np.pi)
            length = rng.uniform(min_len, max_len)
            cy = rng.uniform(0.0, spec.height - 1)
            cx = rng.uniform(0.0, spec.width - 1)
            dy = 0.5 * length * np.sin(angle)
            dx = 0.5 * length * np.cos(angle)
            ys = (cy - dy, cy + dy)
            xs = (cx - dx, cx + dx)
            if (min(ys) - half >= 0 and max(ys) + half <= spec.height - 1
                    and min(xs) - half >= 0 and max(xs) + half <= spec.width - 1):
                mask |= _segment_mask(mask.shape, (ys[0], xs[0]), (ys[1], xs[1]), half)
                break
        else:
            raise PlacementError(
                f"could not fit a track of thickness {spec.size} inside a "
                f"{spec.width}x{spec.height} canvas")
    return mask


def _box_blur3(image):
    padded = np.pad(image, 1, mode="reflect" if min(image.shape) > 1 else "edge")
    out = np.zeros_like(image)
    h, w = image.shape
    for dy in range(3):
        for dx in range(3):
            out += padded[dy:dy + h, dx:dx + w]
    return out / 9.0


def generate(spec):
    """Render a fixture.

    Parameters
    ----------
    spec : FixtureSpec

    Returns
    -------
    image : ndarray of float64, shape (height, width)
        Intensities in [0, 1].
    gt : ndarray of bool, shape (height, width)
        Exact shape mask.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if spec.kind is FixtureKind.BLOBS:
        gt = _place_blobs(spec, rng)
    else:
        gt = _place_tracks(spec, rng)

    image = np.where(gt, spec.foreground, spec.background).astype(np.float64)
    if spec.blur:
        image = _box_blur3(image)
    if spec.noise_sigma > 0:
        image = image + rng.normal(0.0, spec.noise_sigma, size=image.shape)
    np.clip(image, 0.0, 1.0, out=image)
    return image, gt
