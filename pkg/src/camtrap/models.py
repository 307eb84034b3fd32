"""Core record types: assets, cameras, detections and review verdicts.

All types here are immutable values; they can be shared freely between
threads and serialized without surprises.
"""

from __future__ import annotations

import hashlib
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum

from .boxes import BoundingBox, Frame

BATCH_UPLOAD = "batch-upload"


def new_id(prefix: str) -> str:
    return f"{prefix}_{uuid.uuid4().hex}"


def content_hash(data: bytes) -> str:
    """Hex SHA-256 of the raw image bytes; the identity key for dedup."""
    return hashlib.sha256(data).hexdigest()


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def to_rfc3339(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def from_rfc3339(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00"))


class IrSensitivity(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class VerdictSentinel(str, Enum):
    """Reviewer outcomes that are not catalog classes.

    BLANK: nothing of interest is actually present.
    NO_GOOD: unusable image; excluded from every metric.
    """

    BLANK = "BLANK"
    NO_GOOD = "NO_GOOD"


@dataclass(frozen=True)
class HumanVerdict:
    """A reviewer's ground-truth call on one detection.

    Exactly one of ``true_class_id`` / ``sentinel`` is set.
    """

    reviewer: str
    reviewed_at: datetime
    true_class_id: int | None = None
    sentinel: VerdictSentinel | None = None

    def __post_init__(self):
        if (self.true_class_id is None) == (self.sentinel is None):
            raise ValueError("verdict needs exactly one of class id or sentinel")


@dataclass(frozen=True)
class ImageAsset:
    """One stored image, identified by the hash of its bytes."""

    asset_id: str
    content_hash: str
    width: int
    height: int
    source: str  # camera_id or BATCH_UPLOAD
    received_at: datetime
    storage_key: str
    dpi: int | None = None
    camera_id: str | None = None
    trigger_time: datetime | None = None
    declared_filename: str | None = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")


@dataclass(frozen=True)
class CameraSource:
    """A registered field camera, matched to inbound mail by sender address."""

    camera_id: str
    name: str
    smtp_sender: str
    ir_sensitivity: IrSensitivity = IrSensitivity.MEDIUM
    location: tuple[float, float] | None = None  # (lat, lon)
    active: bool = True


@dataclass(frozen=True)
class Detection:
    """A classified box on an asset, with optional human verdict."""

    detection_id: str
    asset_id: str
    box: BoundingBox
    class_id: int
    confidence: float
    model_version: str
    verdict: HumanVerdict | None = None

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")
        if self.box.frame is not Frame.ORIGINAL:
            raise ValueError("stored detections use original-image coordinates")
        if self.class_id < 0:
            raise ValueError("class id must be >= 0")

    def with_verdict(self, verdict: HumanVerdict) -> "Detection":
        return replace(self, verdict=verdict)
