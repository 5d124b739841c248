"""Scoring engine tests; the assignment search is checked against a remap
oracle that collapses the prediction per assignment and rescores from scratch.
"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from phaseseg.metrics import (
    VOID,
    ConfusionCounts,
    UndefinedMetricError,
    apply_assignment,
    best_binary_assignment,
    confusion,
    count_segments,
    iou_scores,
    miou,
)

# 4x4 hand case: pred marks a 2x2 block, gt marks a shifted block, two voids.
#   pred        gt
#   1 1 0 0     V 1 1 0
#   1 1 0 0     0 1 1 0
#   0 0 0 0     0 0 0 V
#   0 0 0 0     0 0 0 0
# Non-void cells: 14. Walking them: tp (pred=1,gt=1) at (0,1),(1,1) = 2;
# fp at (1,0) = 1 (pred 1, gt 0); (0,0) is void; fn at (0,2),(1,2) = 2;
# tn = 14 - 2 - 1 - 2 = 9.
PRED_4X4 = np.array(
    [
        [1, 1, 0, 0],
        [1, 1, 0, 0],
        [0, 0, 0, 0],
        [0, 0, 0, 0],
    ],
    dtype=np.uint8,
)
GT_4X4 = np.array(
    [
        [VOID, 1, 1, 0],
        [0, 1, 1, 0],
        [0, 0, 0, VOID],
        [0, 0, 0, 0],
    ],
    dtype=np.uint8,
)


def test_confusion_hand_case():
    c = confusion(PRED_4X4, GT_4X4)
    assert (c.tp, c.fp, c.fn, c.tn) == (2, 1, 2, 9)
    assert c.total == 14


def test_confusion_perfect_and_all_void():
    c = confusion(GT_4X4 == 1, np.where(GT_4X4 == VOID, 0, GT_4X4))
    assert c.fp == 0 and c.fn == 0
    all_void = np.full((2, 2), VOID, dtype=np.uint8)
    c2 = confusion(np.zeros((2, 2), dtype=np.uint8), all_void)
    assert c2.total == 0


def test_confusion_rejects_bad_inputs():
    with pytest.raises(ValueError):
        confusion(np.zeros((2, 2)), np.zeros((3, 2)))
    with pytest.raises(ValueError):
        confusion(np.full((2, 2), 3), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        confusion(np.zeros((2, 2)), np.full((2, 2), 9))


def test_miou_hand_case():
    c = confusion(PRED_4X4, GT_4X4)
    iou_fg, iou_bg = iou_scores(c)
    assert iou_fg == pytest.approx(2 / 5)
    assert iou_bg == pytest.approx(9 / 12)
    assert miou(c) == pytest.approx((2 / 5 + 9 / 12) / 2)


def test_miou_direct_arithmetic_case():
    c = ConfusionCounts(tp=3, fp=1, fn=2, tn=10)
    iou_fg, iou_bg = iou_scores(c)
    assert iou_fg == pytest.approx(0.5)
    assert iou_bg == pytest.approx(10 / 13)
    assert miou(c) == pytest.approx((0.5 + 10 / 13) / 2)


def test_miou_perfect_and_inverted():
    assert miou(ConfusionCounts(tp=5, fp=0, fn=0, tn=11)) == 1.0
    assert miou(ConfusionCounts(tp=0, fp=11, fn=5, tn=0)) == 0.0


def test_miou_absent_class_scores_one():
    # no foreground anywhere: fg IOU vacuously 1
    assert miou(ConfusionCounts(tp=0, fp=0, fn=0, tn=9)) == 1.0


def test_miou_undefined_for_empty():
    with pytest.raises(UndefinedMetricError):
        miou(ConfusionCounts(0, 0, 0, 0))


def test_miou_swap_invariance():
    rng = np.random.default_rng(6)
    for _ in range(25):
        pred = rng.integers(0, 2, size=(5, 5)).astype(np.uint8)
        gt = rng.choice([0, 1, VOID], size=(5, 5), p=[0.45, 0.45, 0.1]).astype(np.uint8)
        if (gt != VOID).sum() == 0:
            continue
        swapped_gt = np.where(gt == VOID, VOID, 1 - gt).astype(np.uint8)
        assert miou(confusion(pred, gt)) == pytest.approx(
            miou(confusion(1 - pred, swapped_gt))
        )


# ------------------------------------------------------------ count_segments


def test_count_segments():
    assert count_segments(np.zeros((3, 3))) == 1
    assert count_segments(np.array([[0, 3], [4, 3]])) == 3
    with pytest.raises(ValueError):
        count_segments(np.zeros((0, 2)))


# ------------------------------------------------- best_binary_assignment


def assignment_oracle(pred, gt):
    """Independent enumeration: remap, rescore, keep the lexicographic best."""
    labels = [int(v) for v in np.unique(pred)]
    best = None
    for flags in itertools.product(("bg", "fg"), repeat=len(labels)):
        mapping = dict(zip(labels, flags))
        score = miou(confusion(apply_assignment(pred, mapping), gt))
        if best is None or score > best[0]:
            best = (score, mapping)
    return best


def test_assignment_identity_when_aligned():
    gt = np.where(GT_4X4 == VOID, 0, GT_4X4).astype(np.uint8)
    report = best_binary_assignment(gt, gt)
    assert report.miou == 1.0
    assert report.assignment == {0: "bg", 1: "fg"}


def test_assignment_flip_recovers_inverted_prediction():
    gt = np.where(GT_4X4 == VOID, 0, GT_4X4).astype(np.uint8)
    inverted = (1 - gt).astype(np.uint8)
    report = best_binary_assignment(inverted, gt)
    assert report.miou == 1.0
    assert report.assignment == {0: "fg", 1: "bg"}


def test_assignment_matches_oracle_random_instances():
    rng = np.random.default_rng(17)
    for _ in range(100):
        n_labels = int(rng.integers(1, 5))
        pred = rng.integers(0, n_labels, size=(6, 6)).astype(np.uint8)
        gt = rng.choice([0, 1, VOID], size=(6, 6), p=[0.4, 0.4, 0.2]).astype(np.uint8)
        if (gt != VOID).sum() == 0:
            continue
        report = best_binary_assignment(pred, gt)
        score, mapping = assignment_oracle(pred, gt)
        assert report.miou == pytest.approx(score, abs=1e-12)
        assert report.assignment == mapping


def test_assignment_tie_prefers_background_for_label_0():
    # one label covering everything, gt half fg half bg: fg and bg mappings tie
    pred = np.zeros((2, 2), dtype=np.uint8)
    gt = np.array([[0, 0], [1, 1]], dtype=np.uint8)
    report = best_binary_assignment(pred, gt)
    assert report.assignment == {0: "bg"}


def test_assignment_beats_fixed_assignments():
    rng = np.random.default_rng(23)
    pred = rng.integers(0, 4, size=(8, 8)).astype(np.uint8)
    gt = rng.choice([0, 1], size=(8, 8)).astype(np.uint8)
    best = best_binary_assignment(pred, gt)
    labels = [int(v) for v in np.unique(pred)]
    for flags in itertools.product(("bg", "fg"), repeat=len(labels)):
        mapping = dict(zip(labels, flags))
        fixed = miou(confusion(apply_assignment(pred, mapping), gt))
        assert best.miou >= fixed - 1e-15


def test_void_pixels_never_influence_report():
    rng = np.random.default_rng(31)
    pred = rng.integers(0, 3, size=(7, 7)).astype(np.uint8)
    gt = rng.choice([0, 1, VOID], size=(7, 7), p=[0.4, 0.4, 0.2]).astype(np.uint8)
    report = best_binary_assignment(pred, gt)
    perturbed = pred.copy()
    perturbed[gt == VOID] = rng.integers(0, 3, size=int((gt == VOID).sum()))
    report2 = best_binary_assignment(perturbed, gt)
    assert report.miou == report2.miou
    assert report.assignment == report2.assignment


def test_assignment_rejects_too_many_labels():
    pred = np.arange(9, dtype=np.uint8).reshape(3, 3)
    gt = np.zeros((3, 3), dtype=np.uint8)
    with pytest.raises(ValueError):
        best_binary_assignment(pred, gt)


def test_assignment_undefined_for_all_void():
    with pytest.raises(UndefinedMetricError):
        best_binary_assignment(
            np.zeros((2, 2), dtype=np.uint8), np.full((2, 2), VOID, dtype=np.uint8)
        )


@settings(max_examples=40, deadline=None)
@given(
    hnp.arrays(np.uint8, (4, 5), elements=st.integers(0, 2)),
    hnp.arrays(np.uint8, (4, 5), elements=st.sampled_from([0, 1, VOID])),
)
def test_assignment_oracle_property(pred, gt):
    if (gt != VOID).sum() == 0:
        return
    report = best_binary_assignment(pred, gt)
    score, mapping = assignment_oracle(pred, gt)
    assert report.miou == pytest.approx(score, abs=1e-12)
    assert report.assignment == mapping
