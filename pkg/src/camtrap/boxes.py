"""Axis-aligned bounding boxes and the coordinate frames they live in."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import DegenerateBox, FrameMismatch


class Frame(str, Enum):
    """Coordinate frame a box is expressed in."""

    ORIGINAL = "original-image"
    MODEL_INPUT = "model-input-640"
    NORMALIZED = "normalized-unit"


@dataclass(frozen=True)
class BoundingBox:
    """Corner-form rectangle. Coordinates are continuous reals.

    Pixel-frame coordinates may be negative before clamping; the
    normalized frame is restricted to the unit square.
    """

    x_min: float
    y_min: float
    x_max: float
    y_max: float
    frame: Frame = Frame.ORIGINAL

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DegenerateBox(
                f"empty box ({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})"
            )
        if self.frame is Frame.NORMALIZED:
            if not (0.0 <= self.x_min and self.x_max <= 1.0 and 0.0 <= self.y_min and self.y_max <= 1.0):
                raise DegenerateBox("normalized box outside the unit square")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


def clamp_box(box: BoundingBox, width: float, height: float) -> BoundingBox:
    """Clip ``box`` into ``[0, width] x [0, height]``.

    Raises DegenerateBox when nothing of the box survives clipping.
    Idempotent: clamping a clamped box is a no-op.
    """
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be >= 1")
    x_min = min(max(box.x_min, 0.0), width)
    x_max = min(max(box.x_max, 0.0), width)
    y_min = min(max(box.y_min, 0.0), height)
    y_max = min(max(box.y_max, 0.0), height)
    if x_min >= x_max or y_min >= y_max:
        raise DegenerateBox(f"box {box.corners()} lies outside {width}x{height}")
    return replace(box, x_min=x_min, y_min=y_min, x_max=x_max, y_max=y_max)


def intersection_area(a: BoundingBox, b: BoundingBox) -> float:
    """Overlap area of two boxes in the same frame (0.0 when disjoint)."""
    if a.frame is not b.frame:
        raise FrameMismatch(f"{a.frame.value} vs {b.frame.value}")
    w = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    h = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if w <= 0.0 or h <= 0.0:
        return 0.0
    return w * h
