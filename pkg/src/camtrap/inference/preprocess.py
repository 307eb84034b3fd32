"""Image decoding and model-input tensor construction."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import UndecodableImage
from .letterbox import LetterboxTransform, letterbox

PAD_GRAY = 114  # conventional letterbox fill, per channel


@dataclass(frozen=True)
class DecodedImage:
    width: int
    height: int
    dpi: int | None
    rgb: "np.ndarray"  # HxWx3 uint8


def decode_image(image_bytes: bytes) -> DecodedImage:
    """Decode to RGB; raises UndecodableImage for anything PIL rejects."""
    try:
        with Image.open(io.BytesIO(image_bytes)) as img:
            dpi_info = img.info.get("dpi")
            dpi = int(round(dpi_info[0])) if dpi_info else None
            rgb = np.asarray(img.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise UndecodableImage(str(exc)) from exc
    height, width = rgb.shape[:2]
    if width < 1 or height < 1:
        raise UndecodableImage("decoded image is empty")
    return DecodedImage(width=width, height=height, dpi=dpi, rgb=rgb)


def image_tensor(
    decoded: DecodedImage, target: int = 640
) -> tuple["np.ndarray", LetterboxTransform]:
    """Letterboxed CHW float32 tensor in [0, 1], plus the transform used."""
    t = letterbox(decoded.width, decoded.height, target)
    img = Image.fromarray(decoded.rgb)
    resized = img.resize((t.scaled_width, t.scaled_height), Image.BILINEAR)
    canvas = Image.new("RGB", (target, target), (PAD_GRAY, PAD_GRAY, PAD_GRAY))
    canvas.paste(resized, (t.pad_left, t.pad_top))
    hwc = np.asarray(canvas, dtype=np.float32) / 255.0
    return np.ascontiguousarray(hwc.transpose(2, 0, 1)), t
