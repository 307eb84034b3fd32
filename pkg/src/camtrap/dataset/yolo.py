"""YOLO label files and the VOC round-trip.

A label row is ``class_id cx cy w h`` with all four geometry fields
normalized to the image size. Rows serialize with six decimal places,
which keeps sub-pixel fidelity even at 4K image widths.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..boxes import BoundingBox
from ..catalog import SpeciesCatalog
from ..errors import ExcludedDocument
from .voc import VocDocument


@dataclass(frozen=True)
class YoloRow:
    class_id: int
    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        if self.class_id < 0:
            raise ValueError("class id must be >= 0")
        if not (0.0 < self.w <= 1.0 and 0.0 < self.h <= 1.0):
            raise ValueError(f"degenerate normalized size {self.w}x{self.h}")
        if not (0.0 <= self.cx <= 1.0 and 0.0 <= self.cy <= 1.0):
            raise ValueError(f"center ({self.cx}, {self.cy}) outside unit square")

    def serialize(self) -> str:
        return f"{self.class_id} {self.cx:.6f} {self.cy:.6f} {self.w:.6f} {self.h:.6f}"

    @classmethod
    def parse(cls, line: str) -> "YoloRow":
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"expected 5 fields, got {len(parts)}: {line!r}")
        return cls(int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3]), float(parts[4]))


@dataclass(frozen=True)
class YoloLabelFile:
    image_stem: str
    rows: tuple[YoloRow, ...]

    def serialize(self) -> str:
        return "".join(row.serialize() + "\n" for row in self.rows)

    def write(self, directory: str | Path) -> Path:
        path = Path(directory) / f"{self.image_stem}.txt"
        path.write_text(self.serialize(), encoding="utf-8")
        return path


def voc_to_yolo(doc: VocDocument, catalog: SpeciesCatalog) -> YoloLabelFile:
    """Convert a parsed VOC document into normalized YOLO rows.

    Refuses documents flagged as excluded; raises UnknownClass for any
    object name the catalog cannot resolve.
    """
    if doc.excluded:
        raise ExcludedDocument(f"{doc.image_filename or '<document>'} was rejected at labeling")
    w, h = float(doc.image_width), float(doc.image_height)
    rows = tuple(
        YoloRow(
            class_id=catalog.lookup(obj.name),
            cx=(obj.box.x_min + obj.box.x_max) / (2.0 * w),
            cy=(obj.box.y_min + obj.box.y_max) / (2.0 * h),
            w=(obj.box.x_max - obj.box.x_min) / w,
            h=(obj.box.y_max - obj.box.y_min) / h,
        )
        for obj in doc.objects
    )
    return YoloLabelFile(image_stem=doc.image_stem, rows=rows)


def yolo_to_box(row: YoloRow, width: float, height: float) -> BoundingBox:
    """Recover corner-form pixel coordinates from a normalized row."""
    return BoundingBox(
        x_min=(row.cx - row.w / 2.0) * width,
        y_min=(row.cy - row.h / 2.0) * height,
        x_max=(row.cx + row.w / 2.0) * width,
        y_max=(row.cy + row.h / 2.0) * height,
    )
