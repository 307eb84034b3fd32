"""Alert rules and their evaluation.

Evaluation is a pure function: given a detection, the rule set, and the
recent alert history, it decides which rules fire. Cooldown is keyed by
(rule, camera, class) so one camera's busy nest cannot silence another
camera's sightings.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum

from ..models import Detection, new_id

ALL_CAMERAS = "*"


class SinkKind(str, Enum):
    WEBHOOK = "webhook"
    EMAIL = "email"
    LOG = "log"


@dataclass(frozen=True)
class SinkSpec:
    kind: SinkKind
    target: str = ""  # URL for webhook, address for email

    def __post_init__(self):
        if self.kind is not SinkKind.LOG and not self.target:
            raise ValueError(f"{self.kind.value} sink needs a target")


class DeliveryStatus(str, Enum):
    PENDING = "pending"
    DELIVERED = "delivered"
    FAILED = "failed"


@dataclass(frozen=True)
class AlertRule:
    rule_id: str
    class_ids: frozenset[int]
    min_confidence: float
    sink: SinkSpec
    cameras: frozenset[str] | None = None  # None means every camera
    cooldown_seconds: int = 300
    enabled: bool = True
    name: str = ""

    def __post_init__(self):
        if not self.class_ids:
            raise ValueError("rule needs at least one class")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError("min confidence outside [0, 1]")
        if self.cooldown_seconds < 0:
            raise ValueError("cooldown cannot be negative")

    def applies_to_camera(self, camera_id: str | None) -> bool:
        if self.cameras is None or ALL_CAMERAS in self.cameras:
            return True
        return camera_id is not None and camera_id in self.cameras


@dataclass(frozen=True)
class AlertEvent:
    alert_id: str
    rule_id: str
    detection_id: str
    camera_id: str | None
    class_id: int
    fired_at: datetime
    delivery_status: DeliveryStatus = DeliveryStatus.PENDING
    attempts: int = 0


@dataclass(frozen=True)
class RecentAlert:
    """The slice of alert history cooldown checks need."""

    rule_id: str
    camera_id: str | None
    class_id: int
    fired_at: datetime


def evaluate(
    detection: Detection,
    camera_id: str | None,
    rules: list[AlertRule],
    recent_alerts: list[RecentAlert],
    now: datetime,
) -> list[AlertEvent]:
    """Alerts to fire for one freshly persisted detection.

    A rule fires when it is enabled, matches the class, confidence and
    camera, and no alert for the same (rule, camera, class) fired within
    its cooldown. Deterministic given its inputs.
    """
    fired: list[AlertEvent] = []
    for rule in rules:
        if not rule.enabled:
            continue
        if detection.class_id not in rule.class_ids:
            continue
        if detection.confidence < rule.min_confidence:
            continue
        if not rule.applies_to_camera(camera_id):
            continue
        if rule.cooldown_seconds > 0:
            blocked = any(
                r.rule_id == rule.rule_id
                and r.camera_id == camera_id
                and r.class_id == detection.class_id
                and (now - r.fired_at).total_seconds() < rule.cooldown_seconds
                for r in recent_alerts
            )
            if blocked:
                continue
        fired.append(
            AlertEvent(
                alert_id=new_id("alert"),
                rule_id=rule.rule_id,
                detection_id=detection.detection_id,
                camera_id=camera_id,
                class_id=detection.class_id,
                fired_at=now,
            )
        )
    return fired


def default_rules() -> list[AlertRule]:
    """Ships with one example rule: curlew adults and chicks, log sink."""
    return [
        AlertRule(
            rule_id=new_id("rule"),
            name="curlew-activity",
            class_ids=frozenset({22, 23}),
            min_confidence=0.5,
            sink=SinkSpec(kind=SinkKind.LOG),
            cooldown_seconds=300,
        )
    ]
