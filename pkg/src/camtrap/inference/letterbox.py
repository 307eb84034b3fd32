"""Aspect-preserving resize + pad to the square model input, and its inverse.

The image scales by ``target / max(width, height)`` so the long side fills
the canvas exactly; scaled dimensions round half-up; the leftover padding
splits floor-left/top, ceil-right/bottom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..boxes import BoundingBox, Frame, clamp_box

MODEL_INPUT_SIZE = 640


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class LetterboxTransform:
    scale: float
    pad_left: int
    pad_top: int
    target: int = MODEL_INPUT_SIZE
    scaled_width: int = 0
    scaled_height: int = 0

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.pad_left < 0 or self.pad_top < 0:
            raise ValueError("padding cannot be negative")

    @property
    def pad_right(self) -> int:
        return self.target - self.scaled_width - self.pad_left

    @property
    def pad_bottom(self) -> int:
        return self.target - self.scaled_height - self.pad_top


def letterbox(width: int, height: int, target: int = MODEL_INPUT_SIZE) -> LetterboxTransform:
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be >= 1")
    scale = target / max(width, height)
    scaled_w = _round_half_up(width * scale)
    scaled_h = _round_half_up(height * scale)
    return LetterboxTransform(
        scale=scale,
        pad_left=(target - scaled_w) // 2,
        pad_top=(target - scaled_h) // 2,
        target=target,
        scaled_width=scaled_w,
        scaled_height=scaled_h,
    )


def apply_to_box(box: BoundingBox, t: LetterboxTransform) -> BoundingBox:
    """Map an original-image box into the model-input frame."""
    return BoundingBox(
        x_min=box.x_min * t.scale + t.pad_left,
        y_min=box.y_min * t.scale + t.pad_top,
        x_max=box.x_max * t.scale + t.pad_left,
        y_max=box.y_max * t.scale + t.pad_top,
        frame=Frame.MODEL_INPUT,
    )


def unletterbox_box(
    box: BoundingBox, t: LetterboxTransform, orig_width: int, orig_height: int
) -> BoundingBox:
    """Map a model-input box back to original-image pixels and clamp it.

    Boxes that land entirely inside the padding clamp down to nothing and
    raise DegenerateBox.
    """
    mapped = BoundingBox(
        x_min=(box.x_min - t.pad_left) / t.scale,
        y_min=(box.y_min - t.pad_top) / t.scale,
        x_max=(box.x_max - t.pad_left) / t.scale,
        y_max=(box.y_max - t.pad_top) / t.scale,
        frame=Frame.ORIGINAL,
    )
    return clamp_box(mapped, orig_width, orig_height)
