"""Confidence-sweep curves: precision, recall and F1 against threshold.

At each threshold t the predictions below t are discarded, matching is
re-run from scratch, and micro-averaged precision/recall/F1 are computed
over everything that remains. Conventions at the degenerate ends: with no
surviving predictions precision is 1.0 (nothing claimed, nothing wrong);
with no truths recall is 1.0; F1 is 0.0 whenever precision + recall is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .matching import match_detections
from .records import GroundTruth, ScoredPrediction


@dataclass(frozen=True)
class CurveSeries:
    kind: str  # precision | recall | f1 | pr
    thresholds: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.thresholds) != len(self.values):
            raise ValueError("thresholds and values differ in length")
        if any(b < a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be ascending")
        if self.kind == "recall":
            # guaranteed by construction; a violation means a matching bug
            if any(b > a + 1e-12 for a, b in zip(self.values, self.values[1:])):
                raise ValueError("recall must be non-increasing in threshold")

    def serialize_csv(self) -> str:
        lines = ["threshold,value"]
        lines += [f"{t!r},{v!r}" for t, v in zip(self.thresholds, self.values)]
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.serialize_csv(), encoding="utf-8")


@dataclass(frozen=True)
class CurveBundle:
    precision: CurveSeries
    recall: CurveSeries
    f1: CurveSeries
    peak_f1: float
    peak_f1_threshold: float


def default_grid(preds: list[ScoredPrediction]) -> list[float]:
    """101 evenly spaced thresholds plus every distinct prediction confidence.

    Including the exact confidences makes the F1 peak exact rather than
    grid-quantized.
    """
    points = {i / 100.0 for i in range(101)}
    points.update(p.confidence for p in preds)
    return sorted(points)


def micro_counts_at(
    preds: list[ScoredPrediction],
    truths: list[GroundTruth],
    threshold: float,
    iou_threshold: float,
) -> tuple[int, int, int]:
    """(tp, fp, fn) after discarding predictions below ``threshold``."""
    kept = [p for p in preds if p.confidence >= threshold]
    result = match_detections(kept, truths, iou_threshold)
    return result.tp, result.fp, result.fn


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = (2 * precision * recall / (precision + recall)) if precision + recall > 0 else 0.0
    return precision, recall, f1


def confidence_curves(
    preds: list[ScoredPrediction],
    truths: list[GroundTruth],
    iou_threshold: float = 0.5,
    grid: list[float] | None = None,
) -> CurveBundle:
    if grid is None:
        grid = default_grid(preds)
    else:
        if any(not 0.0 <= t <= 1.0 for t in grid):
            raise ValueError("grid thresholds must lie in [0, 1]")
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be ascending")

    p_vals: list[float] = []
    r_vals: list[float] = []
    f_vals: list[float] = []
    for t in grid:
        tp, fp, fn = micro_counts_at(preds, truths, t, iou_threshold)
        p, r, f = _prf(tp, fp, fn)
        p_vals.append(p)
        r_vals.append(r)
        f_vals.append(f)

    peak_idx = max(range(len(grid)), key=lambda i: (f_vals[i], -grid[i])) if grid else 0
    thresholds = tuple(grid)
    return CurveBundle(
        precision=CurveSeries("precision", thresholds, tuple(p_vals)),
        recall=CurveSeries("recall", thresholds, tuple(r_vals)),
        f1=CurveSeries("f1", thresholds, tuple(f_vals)),
        peak_f1=f_vals[peak_idx] if grid else 0.0,
        peak_f1_threshold=grid[peak_idx] if grid else 0.0,
    )
