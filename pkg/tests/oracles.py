"""Independent brute-force oracles for the evaluation mathematics.

These deliberately avoid the production code paths: no shared sorting
helpers, no cumulative arrays, no envelope precomputation. Matching is an
exhaustive scan following the same documented rules (confidence
descending, ties by image id then box corners then class id; candidate
truths need IoU >= threshold, best IoU wins, earliest input order on
ties). Counts are recomputed from scratch at every threshold.
"""

from __future__ import annotations

from fractions import Fraction


def oracle_iou_cells(a: tuple[int, int, int, int], b: tuple[int, int, int, int]) -> Fraction:
    """IoU of integer boxes by counting unit cells. Exact but O(area)."""
    cells_a = {(x, y) for x in range(a[0], a[2]) for y in range(a[1], a[3])}
    cells_b = {(x, y) for x in range(b[0], b[2]) for y in range(b[1], b[3])}
    union = cells_a | cells_b
    if not union:
        return Fraction(0)
    return Fraction(len(cells_a & cells_b), len(union))


def _iou(box_a, box_b) -> float:
    ax1, ay1, ax2, ay2 = box_a
    bx1, by1, bx2, by2 = box_b
    w = min(ax2, bx2) - max(ax1, bx1)
    h = min(ay2, by2) - max(ay1, by1)
    if w <= 0 or h <= 0:
        return 0.0
    inter = w * h
    union = (ax2 - ax1) * (ay2 - ay1) + (bx2 - bx1) * (by2 - by1) - inter
    return inter / union if union > 0 else 0.0


def _comes_before(p, q) -> bool:
    """Strict total order on prediction tuples (image, class, conf, box)."""
    if p["confidence"] != q["confidence"]:
        return p["confidence"] > q["confidence"]
    if p["image_id"] != q["image_id"]:
        return p["image_id"] < q["image_id"]
    if p["box"] != q["box"]:
        return p["box"] < q["box"]
    return p["class_id"] < q["class_id"]


def oracle_greedy_match(preds: list[dict], truths: list[dict], iou_threshold: float):
    """Exhaustive-scan greedy matching.

    Returns (pairs, unmatched_truth_indices) where pairs maps each pred
    (by identity in the input list) to a truth index or None.
    """
    remaining = list(range(len(preds)))
    taken = [False] * len(truths)
    pairs: list[tuple[int, int | None]] = []
    while remaining:
        # find the first prediction under the documented order by scanning
        best = remaining[0]
        for idx in remaining[1:]:
            if _comes_before(preds[idx], preds[best]):
                best = idx
        remaining.remove(best)
        pred = preds[best]
        chosen = None
        chosen_iou = -1.0
        for t_idx, truth in enumerate(truths):
            if taken[t_idx]:
                continue
            if truth["image_id"] != pred["image_id"] or truth["class_id"] != pred["class_id"]:
                continue
            overlap = _iou(pred["box"], truth["box"])
            if overlap >= iou_threshold and overlap > chosen_iou:
                chosen_iou = overlap
                chosen = t_idx
        if chosen is not None:
            taken[chosen] = True
        pairs.append((best, chosen))
    unmatched = [i for i, flag in enumerate(taken) if not flag]
    return pairs, unmatched


def oracle_micro_counts(preds: list[dict], truths: list[dict], threshold: float, iou_threshold: float):
    """(tp, fp, fn) by rebuilding the instance at one confidence threshold."""
    kept = [p for p in preds if p["confidence"] >= threshold]
    pairs, unmatched = oracle_greedy_match(kept, truths, iou_threshold)
    tp = sum(1 for _, t in pairs if t is not None)
    fp = sum(1 for _, t in pairs if t is None)
    return tp, fp, len(unmatched)


def oracle_prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = (2 * precision * recall / (precision + recall)) if precision + recall > 0 else 0.0
    return precision, recall, f1


def oracle_average_precision(
    preds: list[dict], truths: list[dict], class_id: int, iou_threshold: float
) -> float | None:
    """AP by walking every rank and re-scanning for the envelope maximum."""
    class_truths = [t for t in truths if t["class_id"] == class_id]
    if not class_truths:
        return None
    class_preds = [p for p in preds if p["class_id"] == class_id]
    pairs, _ = oracle_greedy_match(class_preds, class_truths, iou_threshold)
    # pairs are already in rank order (the scan pops best-first)
    hits = [t is not None for _, t in pairs]
    if not hits:
        return 0.0
    n = len(hits)
    precisions = []
    recalls = []
    tp = 0
    for rank in range(1, n + 1):
        tp += 1 if hits[rank - 1] else 0
        precisions.append(tp / rank)
        recalls.append(tp / len(class_truths))
    area = 0.0
    prev = 0.0
    for i in range(n):
        if recalls[i] > prev:
            best_later = 0.0
            for j in range(i, n):  # literal scan, no envelope array
                if precisions[j] > best_later:
                    best_later = precisions[j]
            area += (recalls[i] - prev) * best_later
            prev = recalls[i]
    return area
