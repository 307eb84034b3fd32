"""The detector contract and the decode-to-detections pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from ..boxes import BoundingBox, Frame
from ..catalog import SpeciesCatalog
from ..errors import DegenerateBox
from ..models import Detection, ImageAsset, new_id
from .letterbox import MODEL_INPUT_SIZE, unletterbox_box
from .preprocess import decode_image, image_tensor

OUTPUT_ROWS = 300  # fixed top-k capacity of the output tensor


@dataclass(frozen=True)
class RawRow:
    """One output-tensor row in the model-input frame."""

    x1: float
    y1: float
    x2: float
    y2: float
    score: float
    class_index: int


@dataclass(frozen=True)
class RawModelOutput:
    """Backend output: up to ``capacity`` rows; score-0 rows are padding."""

    rows: tuple[RawRow, ...] = ()
    capacity: int = OUTPUT_ROWS

    def __post_init__(self):
        if len(self.rows) > self.capacity:
            raise ValueError(f"{len(self.rows)} rows exceed capacity {self.capacity}")
        for row in self.rows:
            if not 0.0 <= row.score <= 1.0:
                raise ValueError(f"score {row.score} outside [0, 1]")

    def live_rows(self) -> tuple[RawRow, ...]:
        return tuple(r for r in self.rows if r.score > 0.0)


@dataclass(frozen=True)
class DetectorConfig:
    model_name: str = "camtrap-detector"
    model_version: str = "1"
    confidence_threshold: float = 0.387
    max_detections: int = OUTPUT_ROWS
    input_size: int = MODEL_INPUT_SIZE
    endpoint: str = ""  # remote backend only
    nms_iou: float | None = None  # optional class-agnostic NMS, off by default
    timeout_seconds: float = 10.0
    retries: int = 3
    max_inflight: int = 4

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError("confidence threshold outside [0, 1]")


class DetectorBackend(Protocol):
    """Anything that turns a preprocessed image into raw output rows.

    Implementations must be safe for concurrent calls.
    """

    def infer(self, content_hash: str, tensor) -> RawModelOutput: ...


def _nms(rows: list[RawRow], iou_threshold: float) -> list[RawRow]:
    """Optional class-agnostic suppression for backends that need it."""
    from ..evaluation.matching import iou as box_iou

    kept: list[RawRow] = []
    for row in sorted(rows, key=lambda r: -r.score):
        box = BoundingBox(row.x1, row.y1, row.x2, row.y2, frame=Frame.MODEL_INPUT)
        if all(
            box_iou(box, BoundingBox(k.x1, k.y1, k.x2, k.y2, frame=Frame.MODEL_INPUT))
            < iou_threshold
            for k in kept
        ):
            kept.append(row)
    return kept


def detect(
    asset: ImageAsset,
    image_bytes: bytes,
    backend: DetectorBackend,
    catalog: SpeciesCatalog,
    config: DetectorConfig = DetectorConfig(),
) -> list[Detection]:
    """Run the full pipeline for one image.

    Decode, letterbox, call the backend, drop sub-threshold rows, map the
    class index through the catalog, and return detections in original
    image coordinates. An empty result marks the image a blank candidate.
    Rows whose boxes fall entirely inside the padding are dropped rather
    than surfaced as degenerate detections.
    """
    decoded = decode_image(image_bytes)
    tensor, transform = image_tensor(decoded, config.input_size)
    output = backend.infer(asset.content_hash, tensor)

    rows = [r for r in output.live_rows() if r.score >= config.confidence_threshold]
    if config.nms_iou is not None:
        rows = _nms(rows, config.nms_iou)

    detections: list[Detection] = []
    for row in rows:
        if row.class_index not in catalog:
            continue  # padding or a class this deployment does not track
        model_box = BoundingBox(row.x1, row.y1, row.x2, row.y2, frame=Frame.MODEL_INPUT)
        try:
            original = unletterbox_box(model_box, transform, decoded.width, decoded.height)
        except DegenerateBox:
            continue
        detections.append(
            Detection(
                detection_id=new_id("det"),
                asset_id=asset.asset_id,
                box=original,
                class_id=row.class_index,
                confidence=row.score,
                model_version=config.model_version,
            )
        )
    return detections
