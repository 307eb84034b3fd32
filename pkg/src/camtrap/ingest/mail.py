"""Camera mail parsing: MIME message in, ingest events out.

A camera transmission is an email with one or more image attachments.
The sender's envelope address identifies the camera; a ``camera:<id>``
token in the Subject works as a fallback for installations whose modems
rewrite the sender. Trigger time prefers the EXIF capture timestamp over
the Date header over the receipt time, since camera clocks sit closest
to the infrared trigger.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from email import policy
from email.message import EmailMessage
from email.parser import BytesParser
from email.utils import parseaddr, parsedate_to_datetime
from typing import Protocol

from PIL import Image

from ..errors import NoAttachment, OversizeAttachment, UnknownSender
from ..models import CameraSource, new_id, utcnow

IMAGE_TYPES = {"image/jpeg", "image/png"}
DEFAULT_MAX_ATTACHMENT_MB = 25

_EXIF_SUBIFD = 0x8769
_EXIF_DATETIME_ORIGINAL = 36867
_CAMERA_TOKEN = re.compile(r"camera:([A-Za-z0-9_.-]+)")


class CameraRegistry(Protocol):
    def find_camera_by_sender(self, sender: str) -> CameraSource | None: ...
    def get_camera(self, camera_id: str) -> CameraSource: ...


@dataclass(frozen=True)
class IngestEvent:
    """One image pulled off a camera transmission, ready to queue."""

    event_id: str
    camera_id: str
    image_bytes: bytes
    declared_filename: str
    message_id: str
    trigger_time: datetime
    receipt_time: datetime

    def __post_init__(self):
        if not self.image_bytes:
            raise ValueError("event without image bytes")


def _exif_capture_time(image_bytes: bytes) -> datetime | None:
    try:
        with Image.open(io.BytesIO(image_bytes)) as img:
            exif = img.getexif()
            raw = exif.get_ifd(_EXIF_SUBIFD).get(_EXIF_DATETIME_ORIGINAL) or exif.get(306)
    except Exception:
        return None
    if not raw:
        return None
    try:
        # EXIF format: YYYY:MM:DD HH:MM:SS, no zone; cameras run UTC here
        return datetime.strptime(str(raw).strip(), "%Y:%m:%d %H:%M:%S").replace(
            tzinfo=timezone.utc
        )
    except ValueError:
        return None


def _header_date(msg: EmailMessage) -> datetime | None:
    raw = msg.get("Date")
    if not raw:
        return None
    try:
        parsed = parsedate_to_datetime(raw)
    except (TypeError, ValueError):
        return None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def resolve_camera(
    msg: EmailMessage, envelope_sender: str | None, registry: CameraRegistry
) -> CameraSource:
    """Envelope sender first, then From header, then a Subject token."""
    candidates = []
    if envelope_sender:
        candidates.append(envelope_sender)
    header_from = parseaddr(msg.get("From", ""))[1]
    if header_from:
        candidates.append(header_from)
    for sender in candidates:
        camera = registry.find_camera_by_sender(sender)
        if camera is not None:
            return camera
    token = _CAMERA_TOKEN.search(msg.get("Subject", "") or "")
    if token:
        try:
            camera = registry.get_camera(token.group(1))
        except Exception:
            camera = None
        if camera is not None and camera.active:
            return camera
    raise UnknownSender(f"no active camera for sender {candidates or '<none>'}")


def accept_message(
    raw_mime_bytes: bytes,
    registry: CameraRegistry,
    envelope_sender: str | None = None,
    received_at: datetime | None = None,
    max_attachment_mb: float = DEFAULT_MAX_ATTACHMENT_MB,
) -> list[IngestEvent]:
    """Extract one ingest event per image attachment.

    Raises UnknownSender, NoAttachment or OversizeAttachment; the SMTP
    handler decides how each maps onto a protocol reply.
    """
    received_at = received_at or utcnow()
    msg = BytesParser(policy=policy.default).parsebytes(raw_mime_bytes)
    camera = resolve_camera(msg, envelope_sender, registry)
    message_id = (msg.get("Message-ID") or "").strip()
    cap_bytes = int(max_attachment_mb * 1024 * 1024)

    events: list[IngestEvent] = []
    counter = 0
    for part in msg.walk():
        if part.get_content_type() not in IMAGE_TYPES:
            continue
        payload = part.get_payload(decode=True)
        if not payload:
            continue
        if len(payload) > cap_bytes:
            raise OversizeAttachment(
                f"attachment of {len(payload)} bytes exceeds {max_attachment_mb} MB cap"
            )
        counter += 1
        filename = part.get_filename() or f"attachment-{counter}.jpg"
        trigger = _exif_capture_time(payload) or _header_date(msg) or received_at
        events.append(
            IngestEvent(
                event_id=new_id("evt"),
                camera_id=camera.camera_id,
                image_bytes=payload,
                declared_filename=filename,
                message_id=message_id,
                trigger_time=trigger,
                receipt_time=received_at,
            )
        )

    if not events:
        raise NoAttachment("message carries no image/jpeg or image/png part")
    return events
