"""Mask-vs-ground-truth scoring and optimal level selection (MLSOS)."""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "COMP_COLORS",
    "ConfusionCounts",
    "LevelScore",
    "MccReport",
    "comp_image",
    "confusion_counts",
    "mcc",
    "mlsos",
]

# RGB per outcome in COMP images
COMP_COLORS = {
    "tp": (0, 255, 0),
    "fp": (255, 0, 0),
    "fn": (0, 0, 255),
    "tn": (0, 0, 0),
}


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError(f"confusion counts must be non-negative: {self}")

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class LevelScore:
    level: int
    counts: ConfusionCounts
    mcc_percent: float


@dataclass(frozen=True)
class MccReport:
    """Per-level scores in ascending level order plus the selected level."""

    per_level: tuple
    optimal_level: int

    @property
    def optimal(self):
        return next(s for s in self.per_level if s.level == self.optimal_level)


def _check_pair(mask, gt):
    mask = np.asarray(mask, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if mask.shape != gt.shape:
        raise ValueError(f"mask shape {mask.shape} does not match ground truth {gt.shape}")
    return mask, gt


def confusion_counts(mask, gt):
    """Pixel tallies of ``mask`` against ground truth ``gt``."""
    mask, gt = _check_pair(mask, gt)
    tp = int(np.count_nonzero(mask & gt))
    fp = int(np.count_nonzero(mask & ~gt))
    fn = int(np.count_nonzero(~mask & gt))
    tn = mask.size - tp - fp - fn
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def mcc(counts):
    """Matthews correlation coefficient in percent.

    Returns 0 when any marginal is empty (the coefficient is undefined there).

    Examples
    --------
    >>> mcc(ConfusionCounts(tp=2, tn=3, fp=1, fn=1))
    41.666666666666664
    """
    tp, tn, fp, fn = counts.tp, counts.tn, counts.fp, counts.fn
    # sorted so that swapping or complementing the inputs multiplies in the
    # same order and the symmetries hold bit-exactly
    a, b, c, d = sorted(float(x) for x in (tp + fn, tp + fp, tn + fp, tn + fn))
    if a == 0.0:
        return 0.0
    numerator = float(tp * tn - fp * fn)
    value = 100.0 * numerator / math.sqrt(a * b * c * d)
    return min(100.0, max(-100.0, value))


def mlsos(stack, gt):
    """Score every level of an MLSS stack and pick the best one.

    The optimal level maximises MCC; ties go to the lowest level.
    """
    gt = np.asarray(gt, dtype=bool)
    if gt.shape != stack.masks.shape[1:]:
        raise ValueError(
            f"ground truth shape {gt.shape} does not match stack planes {stack.masks.shape[1:]}")
    scores = []
    for level in stack.levels:
        counts = confusion_counts(stack.mask_at(level), gt)
        scores.append(LevelScore(level=level, counts=counts, mcc_percent=mcc(counts)))
    best = scores[0]
    for score in scores[1:]:
        if score.mcc_percent > best.mcc_percent:
            best = score
    return MccReport(per_level=tuple(scores), optimal_level=best.level)


def comp_image(mask, gt):
    """RGB comparison image: TP green, FP red, FN blue, TN black.

    Returns
    -------
    ndarray of uint8, shape (H, W, 3)
    """
    mask, gt = _check_pair(mask, gt)
    out = np.zeros(mask.shape + (3,), dtype=np.uint8)
    out[mask & gt] = COMP_COLORS["tp"]
    out[mask & ~gt] = COMP_COLORS["fp"]
    out[~mask & gt] = COMP_COLORS["fn"]
    return out
