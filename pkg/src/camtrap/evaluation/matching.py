"""IoU and greedy detection-to-truth matching.

Matching is per image and per class: predictions are ranked by the
documented total order (confidence descending, ties by image id, box,
class id) and each one claims the not-yet-matched same-class truth with
the highest IoU at or above the threshold. Ties between candidate truths
go to the earliest truth in input order. Whatever remains unmatched is a
false positive (predictions) or false negative (truths).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..boxes import BoundingBox, intersection_area
from .records import GroundTruth, ScoredPrediction


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection area over union area, in [0, 1]."""
    inter = intersection_area(a, b)
    union = a.area + b.area - inter
    return inter / union if union > 0.0 else 0.0


@dataclass(frozen=True)
class MatchResult:
    pairs: tuple[tuple[ScoredPrediction, GroundTruth | None], ...]
    unmatched_truths: tuple[GroundTruth, ...]

    @property
    def tp(self) -> int:
        return sum(1 for _, t in self.pairs if t is not None)

    @property
    def fp(self) -> int:
        return sum(1 for _, t in self.pairs if t is None)

    @property
    def fn(self) -> int:
        return len(self.unmatched_truths)


def match_detections(
    preds: list[ScoredPrediction],
    truths: list[GroundTruth],
    iou_threshold: float = 0.5,
) -> MatchResult:
    ranked = sorted(preds, key=ScoredPrediction.sort_key)
    taken = [False] * len(truths)
    # truth indices bucketed by (image, class); input order preserved for ties
    buckets: dict[tuple[str, int], list[int]] = {}
    for idx, truth in enumerate(truths):
        buckets.setdefault((truth.image_id, truth.class_id), []).append(idx)

    pairs: list[tuple[ScoredPrediction, GroundTruth | None]] = []
    for pred in ranked:
        best_idx = -1
        best_iou = -1.0
        for idx in buckets.get((pred.image_id, pred.class_id), ()):
            if taken[idx]:
                continue
            overlap = iou(pred.box, truths[idx].box)
            if overlap >= iou_threshold and overlap > best_iou:
                best_iou = overlap
                best_idx = idx
        if best_idx >= 0:
            taken[best_idx] = True
            pairs.append((pred, truths[best_idx]))
        else:
            pairs.append((pred, None))

    unmatched = tuple(t for idx, t in enumerate(truths) if not taken[idx])
    return MatchResult(pairs=tuple(pairs), unmatched_truths=unmatched)
