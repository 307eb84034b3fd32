"""Alerting: rule evaluation against detections and notification delivery."""

from .delivery import DeliveryResult, deliver, webhook_payload
from .rules import ALL_CAMERAS, AlertEvent, AlertRule, DeliveryStatus, SinkKind, SinkSpec, evaluate

__all__ = [
    "ALL_CAMERAS",
    "AlertEvent",
    "AlertRule",
    "DeliveryResult",
    "DeliveryStatus",
    "SinkKind",
    "SinkSpec",
    "deliver",
    "evaluate",
    "webhook_payload",
]
