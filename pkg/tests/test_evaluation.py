import math
from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starseg.evaluation import (
    COMP_COLORS,
    ConfusionCounts,
    comp_image,
    confusion_counts,
    mcc,
    mlsos,
)
from starseg.mlss import LevelRange, MlssMode, SegmentationStack, mlss
from starseg.synth import FixtureSpec, generate
from starseg.wavelet import starlet_decompose

from oracles import exact_mcc, tally

counts_st = st.builds(ConfusionCounts, *[st.integers(0, 10**6)] * 4)


def stack_from_masks(masks, first=1):
    masks = np.asarray(masks, dtype=bool)
    return SegmentationStack(
        mode=MlssMode.DERIVATIVE,
        levels=LevelRange(first, first + len(masks) - 1),
        raw=masks.astype(float),
        masks=masks,
    )


def test_counts_perfect_agreement():
    gt = np.zeros((6, 6), bool)
    gt[1:3, 2:5] = True
    assert confusion_counts(gt, gt) == ConfusionCounts(tp=6, tn=30, fp=0, fn=0)


def test_counts_perfect_disagreement():
    gt = np.zeros((6, 6), bool)
    gt[1:3, 2:5] = True
    assert confusion_counts(~gt, gt) == ConfusionCounts(tp=0, tn=0, fp=30, fn=6)


def test_counts_match_tally():
    rng = np.random.default_rng(1)
    for _ in range(20):
        m, g = rng.random((8, 8)) > 0.5, rng.random((8, 8)) > 0.4
        c = confusion_counts(m, g)
        assert (c.tp, c.tn, c.fp, c.fn) == tally(m, g)
        assert c.total == 64


def test_counts_reject_mismatch():
    with pytest.raises(ValueError):
        confusion_counts(np.zeros((3, 3)), np.zeros((3, 4)))


def test_counts_reject_negative():
    with pytest.raises(ValueError):
        ConfusionCounts(1, -1, 0, 0)


def test_mcc_anchors():
    assert mcc(ConfusionCounts(tp=50, tn=50, fp=0, fn=0)) == 100.0
    assert mcc(ConfusionCounts(tp=0, tn=0, fp=50, fn=50)) == -100.0
    assert abs(mcc(ConfusionCounts(tp=2, tn=3, fp=1, fn=1)) - 500 / 12) <= 1e-9


@pytest.mark.parametrize("counts", [(0, 100, 0, 0), (100, 0, 0, 0), (0, 90, 0, 10),
                                    (10, 0, 90, 0), (0, 0, 0, 0)])
def test_mcc_degenerate_is_zero(counts):
    assert mcc(ConfusionCounts(*counts)) == 0.0


@settings(max_examples=300)
@given(counts_st)
def test_mcc_matches_exact_oracle(c):
    got = mcc(c)
    want = exact_mcc(c.tp, c.tn, c.fp, c.fn)
    assert -100.0 <= got <= 100.0 and math.isfinite(got)
    if want == 0:
        assert abs(got) <= 1e-9
    else:
        assert abs((Decimal(got) - want) / want) <= Decimal("1e-9")


@settings(max_examples=300)
@given(counts_st)
def test_mcc_symmetries(c):
    swapped = ConfusionCounts(tp=c.tp, tn=c.tn, fp=c.fn, fn=c.fp)
    complement = ConfusionCounts(tp=c.fn, tn=c.fp, fp=c.tn, fn=c.tp)
    assert mcc(swapped) == mcc(c)
    assert mcc(complement) == -mcc(c)


def test_mlsos_single_level():
    gt = np.eye(5, dtype=bool)
    report = mlsos(stack_from_masks([np.zeros((5, 5))], first=3), gt)
    assert report.optimal_level == 3
    assert [s.level for s in report.per_level] == [3]


def test_mlsos_picks_exact_match():
    gt = np.zeros((8, 8), bool)
    gt[2:5, 2:5] = True
    other = np.zeros((8, 8), bool)
    other[2:6, 2:6] = True
    report = mlsos(stack_from_masks([other, gt, other.T, ~gt]), gt)
    assert report.optimal_level == 2
    assert report.optimal.mcc_percent == 100.0


def test_mlsos_ties_go_to_lowest():
    gt = np.zeros((8, 8), bool)
    gt[0, :] = True
    report = mlsos(stack_from_masks([~gt, gt, gt, gt]), gt)
    assert report.optimal_level == 2


def test_mlsos_rejects_mismatch():
    with pytest.raises(ValueError):
        mlsos(stack_from_masks([np.zeros((4, 4))]), np.zeros((4, 5), bool))


def test_mlsos_on_blob_fixture_matches_brute_force():
    img, gt = generate(FixtureSpec(kind="blobs", count=5, size=8, seed=7))
    stack = mlss(img, starlet_decompose(img, 5), LevelRange(1, 5), MlssMode.ORIGINAL)
    report = mlsos(stack, gt)
    values = [float(exact_mcc(*tally(stack.mask_at(i), gt))) for i in range(1, 6)]
    assert [s.level for s in report.per_level] == [1, 2, 3, 4, 5]
    assert report.optimal_level == 1 + values.index(max(values))
    for s, v in zip(report.per_level, values):
        assert abs(s.mcc_percent - v) <= 1e-9


def test_comp_perfect():
    gt = np.zeros((5, 5), bool)
    gt[1:3, 1:4] = True
    rgb = comp_image(gt, gt)
    assert rgb.dtype == np.uint8 and rgb.shape == (5, 5, 3)
    colours = {tuple(p) for p in rgb.reshape(-1, 3)}
    assert colours == {COMP_COLORS["tp"], COMP_COLORS["tn"]}


def test_comp_empty_mask():
    gt = np.zeros((5, 5), bool)
    gt[0, :2] = True
    rgb = comp_image(np.zeros_like(gt), gt)
    blue = np.all(rgb == (0, 0, 255), axis=-1)
    np.testing.assert_array_equal(blue, gt)
    assert not rgb[~gt].any()


def test_comp_full_mask():
    gt = np.zeros((4, 6), bool)
    gt[1, 1:4] = True
    rgb = comp_image(np.ones_like(gt), gt)
    assert np.all(rgb == (0, 255, 0), axis=-1).sum() == 3
    assert np.all(rgb == (255, 0, 0), axis=-1).sum() == 21


def test_comp_histogram_matches_counts():
    rng = np.random.default_rng(4)
    for _ in range(10):
        m, g = rng.random((16, 16)) > 0.5, rng.random((16, 16)) > 0.7
        rgb = comp_image(m, g)
        c = confusion_counts(m, g)
        for name in ("tp", "tn", "fp", "fn"):
            assert np.all(rgb == COMP_COLORS[name], axis=-1).sum() == getattr(c, name)


def test_comp_rejects_mismatch():
    with pytest.raises(ValueError):
        comp_image(np.zeros((2, 2)), np.zeros((3, 2)))
