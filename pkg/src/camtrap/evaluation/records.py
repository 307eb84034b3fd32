"""Scored predictions, ground truths, and their line-record fixture format.

Both predictions and truths serialize as one record per line:

    image_id class_id confidence x_min y_min x_max y_max

Truth files carry a confidence field too (conventionally 1.0); it is
ignored when the file is read as ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from ..boxes import BoundingBox, Frame


@dataclass(frozen=True)
class ScoredPrediction:
    image_id: str
    class_id: int
    confidence: float
    box: BoundingBox

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    def sort_key(self):
        """Total order used everywhere predictions are ranked.

        Confidence descending, then image id, box corners and class id
        ascending, so equal-confidence ties break deterministically.
        """
        return (-self.confidence, self.image_id, self.box.corners(), self.class_id)

    def serialize(self) -> str:
        b = self.box
        return (
            f"{self.image_id} {self.class_id} {self.confidence!r} "
            f"{b.x_min!r} {b.y_min!r} {b.x_max!r} {b.y_max!r}"
        )


@dataclass(frozen=True)
class GroundTruth:
    image_id: str
    class_id: int
    box: BoundingBox

    def serialize(self) -> str:
        b = self.box
        return (
            f"{self.image_id} {self.class_id} 1.0 "
            f"{b.x_min!r} {b.y_min!r} {b.x_max!r} {b.y_max!r}"
        )


def _parse_line(line: str, lineno: int, frame: Frame):
    parts = line.split()
    if len(parts) != 7:
        raise ValueError(f"line {lineno}: expected 7 fields, got {len(parts)}")
    image_id, class_id, confidence = parts[0], int(parts[1]), float(parts[2])
    box = BoundingBox(
        float(parts[3]), float(parts[4]), float(parts[5]), float(parts[6]), frame=frame
    )
    return image_id, class_id, confidence, box


def parse_record_lines(
    lines: Iterable[str], as_truth: bool = False, frame: Frame = Frame.ORIGINAL
) -> list[ScoredPrediction] | list[GroundTruth]:
    out: list = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        image_id, class_id, confidence, box = _parse_line(line, lineno, frame)
        if as_truth:
            out.append(GroundTruth(image_id, class_id, box))
        else:
            out.append(ScoredPrediction(image_id, class_id, confidence, box))
    return out


def load_records(path: str | Path, as_truth: bool = False):
    return parse_record_lines(
        Path(path).read_text(encoding="utf-8").splitlines(), as_truth=as_truth
    )
