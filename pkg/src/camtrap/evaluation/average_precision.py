"""Average precision (all-points interpolation) and mAP at IoU 0.5.

Per class, predictions are ranked by the documented total order and
walked once, marking each true or false against the not-yet-claimed
truths. AP is the area under the precision envelope:

    AP = sum over rank i of (r_i - r_{i-1}) * max_{j >= i} p_j

Classes with no ground truth are excluded from the mean and reported
separately, as their AP is undefined rather than zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import CurveSeries
from .matching import iou
from .records import GroundTruth, ScoredPrediction


def _rank_hits(
    preds: list[ScoredPrediction],
    truths: list[GroundTruth],
    class_id: int,
    iou_threshold: float,
) -> tuple[list[bool], int]:
    """Per-rank hit flags for one class, plus its ground-truth count."""
    ranked = sorted(
        (p for p in preds if p.class_id == class_id), key=ScoredPrediction.sort_key
    )
    class_truths = [t for t in truths if t.class_id == class_id]
    taken = [False] * len(class_truths)
    hits: list[bool] = []
    for pred in ranked:
        best_idx = -1
        best_iou = -1.0
        for idx, truth in enumerate(class_truths):
            if taken[idx] or truth.image_id != pred.image_id:
                continue
            overlap = iou(pred.box, truth.box)
            if overlap >= iou_threshold and overlap > best_iou:
                best_iou = overlap
                best_idx = idx
        if best_idx >= 0:
            taken[best_idx] = True
            hits.append(True)
        else:
            hits.append(False)
    return hits, len(class_truths)


def average_precision(
    preds: list[ScoredPrediction],
    truths: list[GroundTruth],
    class_id: int,
    iou_threshold: float = 0.5,
) -> float | None:
    """AP for one class; None when the class has no ground truth."""
    hits, n_truths = _rank_hits(preds, truths, class_id, iou_threshold)
    if n_truths == 0:
        return None
    if not hits:
        return 0.0

    precisions: list[float] = []
    recalls: list[float] = []
    tp = 0
    for i, hit in enumerate(hits, start=1):
        tp += int(hit)
        precisions.append(tp / i)
        recalls.append(tp / n_truths)

    # precision envelope: max precision at this recall or beyond
    envelope = list(precisions)
    for i in range(len(envelope) - 2, -1, -1):
        envelope[i] = max(envelope[i], envelope[i + 1])

    area = 0.0
    prev_recall = 0.0
    for i in range(len(hits)):
        if recalls[i] > prev_recall:
            area += (recalls[i] - prev_recall) * envelope[i]
            prev_recall = recalls[i]
    return area


def pr_curve(
    preds: list[ScoredPrediction],
    truths: list[GroundTruth],
    class_id: int,
    iou_threshold: float = 0.5,
) -> CurveSeries:
    """Interpolated precision at each achieved recall level (kind 'pr')."""
    hits, n_truths = _rank_hits(preds, truths, class_id, iou_threshold)
    points: dict[float, float] = {}
    if n_truths:
        precisions: list[float] = []
        recalls: list[float] = []
        tp = 0
        for i, hit in enumerate(hits, start=1):
            tp += int(hit)
            precisions.append(tp / i)
            recalls.append(tp / n_truths)
        envelope = list(precisions)
        for i in range(len(envelope) - 2, -1, -1):
            envelope[i] = max(envelope[i], envelope[i + 1])
        for r, p in zip(recalls, envelope):
            points[r] = max(points.get(r, 0.0), p)
    recall_axis = tuple(sorted(points))
    return CurveSeries("pr", recall_axis, tuple(points[r] for r in recall_axis))


@dataclass(frozen=True)
class MapReport:
    per_class: dict[int, float]
    mean: float | None
    no_truth_classes: tuple[int, ...]
    iou_threshold: float


def map_at_50(
    preds: list[ScoredPrediction],
    truths: list[GroundTruth],
    iou_threshold: float = 0.5,
) -> MapReport:
    """Mean AP over every class that has ground truth.

    Classes that appear only in predictions are listed in
    ``no_truth_classes`` instead of dragging the mean down.
    """
    class_ids = sorted({t.class_id for t in truths} | {p.class_id for p in preds})
    per_class: dict[int, float] = {}
    no_truth: list[int] = []
    for class_id in class_ids:
        ap = average_precision(preds, truths, class_id, iou_threshold)
        if ap is None:
            no_truth.append(class_id)
        else:
            per_class[class_id] = ap
    mean = sum(per_class.values()) / len(per_class) if per_class else None
    return MapReport(
        per_class=per_class,
        mean=mean,
        no_truth_classes=tuple(no_truth),
        iou_threshold=iou_threshold,
    )
