"""Starlet wavelet transform and multi-level starlet segmentation."""

__version__ = "0.1.0"

from .evaluation import (  # noqa: E402
    ConfusionCounts,
    MccReport,
    comp_image,
    confusion_counts,
    mcc,
    mlsos,
)
from .mlss import LevelRange, MlssMode, SegmentationStack, binarize, mlss  # noqa: E402
from .wavelet import (  # noqa: E402
    StarletDecomposition,
    b3_spline_kernel_1d,
    dilated_smooth,
    highpass_kernel_2d,
    reconstruct,
    smoothing_kernel_2d,
    starlet_decompose,
)

__all__ = [
    "ConfusionCounts",
    "LevelRange",
    "MccReport",
    "MlssMode",
    "SegmentationStack",
    "StarletDecomposition",
    "b3_spline_kernel_1d",
    "binarize",
    "comp_image",
    "confusion_counts",
    "dilated_smooth",
    "highpass_kernel_2d",
    "mcc",
    "mlss",
    "mlsos",
    "reconstruct",
    "smoothing_kernel_2d",
    "starlet_decompose",
]
