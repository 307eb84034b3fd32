"""Error types shared across the platform.

Every error carries a stable ``code`` string that the API layer maps onto
its wire-level error shape and the CLI prints on stderr.
"""

from __future__ import annotations


class CamtrapError(Exception):
    """Base class for all platform errors."""

    code = "internal"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__)


# domain core

class UnknownClass(CamtrapError):
    """Name or id does not resolve against the species catalog."""

    code = "unknown_class"


class DegenerateBox(CamtrapError):
    """Bounding box has zero area after clamping."""

    code = "degenerate_box"


class InvalidCatalog(CamtrapError):
    """Catalog entries violate the id/name invariants."""

    code = "invalid_catalog"


# dataset tools

class MalformedXml(CamtrapError):
    """Annotation document is not well-formed XML."""

    code = "malformed_xml"


class MissingSize(CamtrapError):
    """Annotation document lacks image width/height."""

    code = "missing_size"


class MissingBox(CamtrapError):
    """An annotated object has no usable bounding box."""

    code = "missing_box"


class ExcludedDocument(CamtrapError):
    """Document was rejected during labeling and must not be converted."""

    code = "excluded_document"


class EmptyDataset(CamtrapError):
    """Dataset split requested over zero ids."""

    code = "empty_dataset"


class InvalidOverride(CamtrapError):
    """Training-manifest override violates a field constraint."""

    code = "invalid_override"


# evaluation

class EmptyInput(CamtrapError):
    """Aggregate requested over an empty collection."""

    code = "empty_input"


class FrameMismatch(CamtrapError):
    """Boxes compared across different coordinate frames."""

    code = "frame_mismatch"


class UnverifiedDetections(CamtrapError):
    """Report requested over detections that lack human verdicts."""

    code = "unverified_detections"

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"{count} detections have no verdict")


# inference gateway

class UndecodableImage(CamtrapError):
    """Image bytes could not be decoded."""

    code = "undecodable_image"


class BackendUnavailable(CamtrapError):
    """Inference backend unreachable after retries (retryable)."""

    code = "backend_unavailable"


class BackendProtocolError(CamtrapError):
    """Inference backend answered outside the wire contract."""

    code = "backend_protocol_error"


class ShapeMismatch(BackendProtocolError):
    """Inference response tensor shape differs from the configured one."""

    code = "shape_mismatch"


# ingest

class NoAttachment(CamtrapError):
    """Message carries no image attachment."""

    code = "no_attachment"


class OversizeAttachment(CamtrapError):
    """Attachment exceeds the configured size cap."""

    code = "oversize_attachment"


class UnknownSender(CamtrapError):
    """Sender does not match any active camera."""

    code = "unknown_sender"


class QueueFull(CamtrapError):
    """Ingest queue is at capacity; delivery should be retried."""

    code = "queue_full"


# store

class IntegrityViolation(CamtrapError):
    """Record references a missing parent or breaks a uniqueness rule."""

    code = "integrity_violation"


class UnknownDetection(CamtrapError):
    """Detection id not present in the store."""

    code = "unknown_detection"


class UnknownAsset(CamtrapError):
    """Asset id not present in the store."""

    code = "unknown_asset"


class UnknownCamera(CamtrapError):
    """Camera id not present in the store."""

    code = "unknown_camera"


class UnknownRule(CamtrapError):
    """Alert-rule id not present in the store."""

    code = "unknown_rule"


class BadCursor(CamtrapError):
    """Pagination cursor is malformed or stale."""

    code = "bad_cursor"


# api

class InvalidRange(CamtrapError):
    """Query parameter fails validation (bad timestamp, mismatched ids)."""

    code = "invalid_range"
