"""Loading photomicrographs and ground truths, writing D/R/COMP outputs.

Inputs may be PNG, JPEG or binary PGM. Samples are normalised to [0, 1]
(8-bit by 255, 16-bit by 65535); colour images are reduced with Rec. 601
luma. Outputs are always lossless (PNG, or PGM when asked for).
"""

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

__all__ = [
    "EmptyImageError",
    "GroundTruth",
    "ImageReadError",
    "ImageWriteError",
    "LoadedImage",
    "OUTPUT_KINDS",
    "UnreadableImageError",
    "UnsupportedFormatError",
    "load_grayscale",
    "load_ground_truth",
    "output_path",
    "parse_output_name",
    "rescale_to_uint8",
    "save_plane",
]

SUPPORTED_FORMATS = {"PNG", "JPEG", "PPM"}  # Pillow reports PGM as PPM
OUTPUT_KINDS = ("D", "R", "COMP")
LUMA_601 = (0.299, 0.587, 0.114)
GT_THRESHOLD = 0.5

_OUTPUT_NAME = re.compile(r"^(?P<stem>.+)_(?P<kind>D|R|COMP)(?P<level>[1-9]\d*)\.png$")


class ImageReadError(OSError):
    """Base class for input image problems."""


class UnreadableImageError(ImageReadError):
    pass


class UnsupportedFormatError(ImageReadError):
    pass


class EmptyImageError(ImageReadError):
    pass


class ImageWriteError(OSError):
    pass


@dataclass(frozen=True)
class LoadedImage:
    pixels: np.ndarray
    source_path: str
    original_channels: int


@dataclass(frozen=True)
class GroundTruth:
    mask: np.ndarray
    source_path: str


def _open(path):
    path = Path(path)
    try:
        img = Image.open(path)
        img.load()
    except UnidentifiedImageError as exc:
        raise UnsupportedFormatError(f"{path}: not a recognised image format") from exc
    except (OSError, ValueError) as exc:
        raise UnreadableImageError(f"{path}: cannot read image ({exc})") from exc
    if img.format not in SUPPORTED_FORMATS:
        raise UnsupportedFormatError(
            f"{path}: format {img.format} not supported (use PNG, JPEG or PGM)")
    if img.width == 0 or img.height == 0:
        raise EmptyImageError(f"{path}: image has zero size")
    return img


def _to_unit_gray(img):
    mode = img.mode
    if mode in ("I;16", "I;16B", "I;16L", "I"):
        return np.asarray(img, dtype=np.float64) / 65535.0, 1
    if mode == "L":
        return np.asarray(img, dtype=np.float64) / 255.0, 1
    if mode in ("1", "LA"):
        return np.asarray(img.convert("L"), dtype=np.float64) / 255.0, len(img.getbands())
    if mode == "F":
        raise UnsupportedFormatError(f"floating-point image mode {mode} not supported")
    channels = len(img.getbands())
    rgb = np.asarray(img.convert("RGB"), dtype=np.float64)
    gray = rgb[..., 0] * LUMA_601[0] + rgb[..., 1] * LUMA_601[1] + rgb[..., 2] * LUMA_601[2]
    return gray / 255.0, channels


def load_grayscale(path):
    """Read an image as float64 grayscale in [0, 1].

    Raises
    ------
    UnreadableImageError
        Missing, unreadable or corrupt file.
    UnsupportedFormatError
        Anything other than PNG, JPEG or PGM.
    EmptyImageError
        Zero-sized image.
    """
    with _open(path) as img:
        pixels, channels = _to_unit_gray(img)
    np.clip(pixels, 0.0, 1.0, out=pixels)
    return LoadedImage(pixels=pixels, source_path=str(path), original_channels=channels)


def load_ground_truth(path):
    """Read a ground-truth image; ROI is gray level strictly above 0.5."""
    loaded = load_grayscale(path)
    return GroundTruth(mask=loaded.pixels > GT_THRESHOLD, source_path=str(path))


def output_path(input_stem, kind, level, out_dir=None):
    """``{stem}_{kind}{level}.png``, e.g. ``test1_R2.png``."""
    if kind not in OUTPUT_KINDS:
        raise ValueError(f"kind must be one of {OUTPUT_KINDS}, got {kind!r}")
    if int(level) != level or level < 1:
        raise ValueError(f"level must be >= 1, got {level!r}")
    name = f"{input_stem}_{kind}{int(level)}.png"
    return Path(out_dir) / name if out_dir is not None else Path(name)


def parse_output_name(name):
    """Inverse of :func:`output_path` -> ``(stem, kind, level)``."""
    match = _OUTPUT_NAME.match(Path(name).name)
    if match is None:
        raise ValueError(f"{name!r} is not an output file name")
    return match["stem"], match["kind"], int(match["level"])


def rescale_to_uint8(plane):
    """Affine map of [min, max] onto [0, 255]; a constant plane maps to 0."""
    plane = np.asarray(plane, dtype=np.float64)
    lo, hi = float(plane.min()), float(plane.max())
    if hi == lo:
        return np.zeros(plane.shape, dtype=np.uint8)
    scaled = (plane - lo) * (255.0 / (hi - lo))
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)


def _as_pil(plane):
    arr = np.asarray(plane)
    if arr.dtype == bool:
        return Image.fromarray(np.where(arr, 255, 0).astype(np.uint8), mode="L")
    if arr.ndim == 3:
        if arr.shape[2] != 3 or arr.dtype != np.uint8:
            raise ValueError("colour planes must be uint8 with shape (H, W, 3)")
        return Image.fromarray(arr, mode="RGB")
    if arr.ndim == 2:
        return Image.fromarray(rescale_to_uint8(arr), mode="L")
    raise ValueError(f"cannot save array of shape {arr.shape}")


def save_plane(plane, path):
    """Write a plane losslessly.

    Boolean masks become 0/255, ``(H, W, 3)`` uint8 arrays are written as
    RGB, and any other 2D array is rescaled with :func:`rescale_to_uint8`.
    The format follows the suffix (``.png`` or ``.pgm``).
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in (".png", ".pgm"):
        raise ValueError(f"{path}: output must be .png or .pgm")
    img = _as_pil(plane)
    if suffix == ".pgm" and img.mode != "L":
        raise ValueError(f"{path}: PGM output holds grayscale planes only")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        img.save(path, format="PNG" if suffix == ".png" else "PPM")
    except OSError as exc:
        raise ImageWriteError(f"{path}: cannot write image ({exc})") from exc
