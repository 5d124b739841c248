"""Binary mIOU scoring with void-pixel exclusion.

Ground truth uses three sentinels: 0 background, 1 foreground, 255 void.
Void pixels never enter any count.  Scores:

    IOU_fg = tp / (tp + fp + fn)
    IOU_bg = tn / (tn + fn + fp)
    mIOU   = (IOU_fg + IOU_bg) / 2

A class absent from both prediction and ground truth scores IOU 1 (vacuous
agreement); this keeps single-class images well defined.

Multi-label predictions are scored through best_binary_assignment, which maps
each label to foreground or background so as to maximize mIOU and reports the
mapping it used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

VOID = 255
MAX_ASSIGNMENT_LABELS = 8


class UndefinedMetricError(ValueError):
    """Raised when a score has no defined value (no non-void pixels)."""


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "fn", "tn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class EvaluationReport:
    iou_fg: float
    iou_bg: float
    miou: float
    assignment: dict[int, str]
    runtime_ms: float = 0.0


def confusion(pred: np.ndarray, gt: np.ndarray) -> ConfusionCounts:
    """Counts over non-void pixels of a binary prediction."""
    p = np.asarray(pred)
    g = np.asarray(gt)
    if p.shape != g.shape:
        raise ValueError(f"shape mismatch: pred {p.shape} vs gt {g.shape}")
    if p.size == 0:
        raise ValueError("empty inputs")
    if not np.isin(p, (0, 1)).all():
        raise ValueError("prediction must be binary (0/1)")
    if not np.isin(g, (0, 1, VOID)).all():
        raise ValueError("ground truth must use values 0, 1, 255")
    valid = g != VOID
    pv = p[valid].astype(bool)
    gv = g[valid].astype(bool)
    return ConfusionCounts(
        tp=int((pv & gv).sum()),
        fp=int((pv & ~gv).sum()),
        fn=int((~pv & gv).sum()),
        tn=int((~pv & ~gv).sum()),
    )


def iou_scores(counts: ConfusionCounts) -> tuple[float, float]:
    """(IOU_fg, IOU_bg); absent-from-both classes score 1."""
    if counts.total == 0:
        raise UndefinedMetricError("no non-void pixels to score")
    fg_denominator = counts.tp + counts.fp + counts.fn
    bg_denominator = counts.tn + counts.fn + counts.fp
    iou_fg = counts.tp / fg_denominator if fg_denominator else 1.0
    iou_bg = counts.tn / bg_denominator if bg_denominator else 1.0
    return iou_fg, iou_bg


def miou(counts: ConfusionCounts) -> float:
    iou_fg, iou_bg = iou_scores(counts)
    return (iou_fg + iou_bg) / 2.0


def count_segments(pred: np.ndarray) -> int:
    """Number of distinct label values present."""
    arr = np.asarray(pred)
    if arr.size == 0:
        raise ValueError("empty label map")
    return int(len(np.unique(arr)))


def best_binary_assignment(
    pred: np.ndarray, gt: np.ndarray, runtime_ms: float = 0.0
) -> EvaluationReport:
    """Score a multi-label prediction under its best label -> fg/bg mapping.

    All 2^L assignments are evaluated from per-label counts; ties go to the
    lexicographically smallest assignment over ascending labels with bg < fg,
    so label 0 prefers background.
    """
    p = np.asarray(pred)
    g = np.asarray(gt)
    if p.shape != g.shape:
        raise ValueError(f"shape mismatch: pred {p.shape} vs gt {g.shape}")
    if p.size == 0:
        raise ValueError("empty inputs")
    if not np.isin(g, (0, 1, VOID)).all():
        raise ValueError("ground truth must use values 0, 1, 255")

    labels = [int(v) for v in np.unique(p)]
    if len(labels) > MAX_ASSIGNMENT_LABELS:
        raise ValueError(f"too many labels for assignment search: {len(labels)}")

    valid = g != VOID
    if not valid.any():
        raise UndefinedMetricError("no non-void pixels to score")
    gv = g[valid].astype(bool)
    pv = p[valid]
    fg_count = {lab: int((gv & (pv == lab)).sum()) for lab in labels}
    bg_count = {lab: int((~gv & (pv == lab)).sum()) for lab in labels}
    total_fg = int(gv.sum())
    total_bg = int((~gv).sum())

    best: tuple[float, tuple[int, ...], ConfusionCounts] | None = None
    for flags in itertools.product((0, 1), repeat=len(labels)):
        tp = sum(fg_count[lab] for lab, f in zip(labels, flags) if f)
        fp = sum(bg_count[lab] for lab, f in zip(labels, flags) if f)
        counts = ConfusionCounts(tp=tp, fp=fp, fn=total_fg - tp, tn=total_bg - fp)
        score = miou(counts)
        if best is None or score > best[0]:
            best = (score, flags, counts)

    assert best is not None
    score, flags, counts = best
    iou_fg, iou_bg = iou_scores(counts)
    assignment = {
        lab: ("fg" if f else "bg") for lab, f in zip(labels, flags)
    }
    return EvaluationReport(
        iou_fg=iou_fg,
        iou_bg=iou_bg,
        miou=score,
        assignment=assignment,
        runtime_ms=runtime_ms,
    )


def apply_assignment(pred: np.ndarray, assignment: dict[int, str]) -> np.ndarray:
    """Collapse a multi-label prediction to binary via a label -> fg/bg map."""
    p = np.asarray(pred)
    out = np.zeros(p.shape, dtype=np.uint8)
    for lab, side in assignment.items():
        if side == "fg":
            out[p == lab] = 1
    return out
