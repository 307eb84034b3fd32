"""Alert delivery sinks: webhook, email, structured log line.

Webhook delivery retries up to three attempts with a short backoff; a
sink that stays down marks the alert failed but the alert row is kept so
an operator can replay it once the sink recovers.
"""

from __future__ import annotations

import json
import logging
import smtplib
import time
from dataclasses import dataclass
from email.message import EmailMessage

import httpx

from ..catalog import SpeciesCatalog
from ..models import CameraSource, Detection, to_rfc3339
from .rules import AlertEvent, DeliveryStatus, SinkKind, SinkSpec

log = logging.getLogger("camtrap.alerts")

WEBHOOK_ATTEMPTS = 3


def webhook_payload(
    alert: AlertEvent,
    detection: Detection,
    camera: CameraSource | None,
    catalog: SpeciesCatalog,
    image_url: str,
) -> dict:
    """The JSON object every webhook sink receives."""
    return {
        "alert_id": alert.alert_id,
        "rule_id": alert.rule_id,
        "camera": {
            "id": camera.camera_id if camera else None,
            "name": camera.name if camera else None,
            "location": list(camera.location) if camera and camera.location else None,
        },
        "detection": {
            "class": catalog.scientific_name(detection.class_id)
            if detection.class_id in catalog
            else str(detection.class_id),
            "confidence": detection.confidence,
            "box": {
                "x_min": detection.box.x_min,
                "y_min": detection.box.y_min,
                "x_max": detection.box.x_max,
                "y_max": detection.box.y_max,
            },
        },
        "image_url": image_url,
        "fired_at": to_rfc3339(alert.fired_at),
    }


@dataclass(frozen=True)
class DeliveryResult:
    status: DeliveryStatus
    attempts: int
    detail: str = ""


def _deliver_webhook(url: str, payload: dict, backoff_seconds: float) -> DeliveryResult:
    body = json.dumps(payload).encode("utf-8")
    last = ""
    for attempt in range(1, WEBHOOK_ATTEMPTS + 1):
        if attempt > 1:
            time.sleep(backoff_seconds * 2 ** (attempt - 2))
        try:
            response = httpx.post(
                url, content=body, headers={"content-type": "application/json"}, timeout=5.0
            )
            if 200 <= response.status_code < 300:
                return DeliveryResult(DeliveryStatus.DELIVERED, attempt)
            last = f"HTTP {response.status_code}"
        except httpx.HTTPError as exc:
            last = str(exc)
    return DeliveryResult(DeliveryStatus.FAILED, WEBHOOK_ATTEMPTS, last)


def _deliver_email(
    address: str, payload: dict, relay_host: str, relay_port: int
) -> DeliveryResult:
    msg = EmailMessage()
    species = payload["detection"]["class"]
    msg["Subject"] = f"[camtrap] {species} detected"
    msg["From"] = "alerts@camtrap.local"
    msg["To"] = address
    msg.set_content(json.dumps(payload, indent=2))
    try:
        with smtplib.SMTP(relay_host, relay_port, timeout=10) as smtp:
            smtp.send_message(msg)
        return DeliveryResult(DeliveryStatus.DELIVERED, 1)
    except (OSError, smtplib.SMTPException) as exc:
        return DeliveryResult(DeliveryStatus.FAILED, 1, str(exc))


def deliver(
    sink: SinkSpec,
    payload: dict,
    backoff_seconds: float = 0.5,
    email_relay: tuple[str, int] = ("localhost", 25),
) -> DeliveryResult:
    if sink.kind is SinkKind.LOG:
        log.info("alert %s", json.dumps(payload, sort_keys=True))
        return DeliveryResult(DeliveryStatus.DELIVERED, 1)
    if sink.kind is SinkKind.WEBHOOK:
        return _deliver_webhook(sink.target, payload, backoff_seconds)
    return _deliver_email(sink.target, payload, *email_relay)
