"""Pydantic request/response models for the REST surface.

Field naming is snake_case and timestamps are RFC 3339 UTC strings.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..alerts.rules import AlertEvent, AlertRule, SinkKind, SinkSpec
from ..catalog import SpeciesCatalog
from ..models import CameraSource, Detection, HumanVerdict, IrSensitivity, to_rfc3339


class ApiErrorBody(BaseModel):
    http_status: int
    code: str
    message: str
    request_id: str


class BoxOut(BaseModel):
    x_min: float
    y_min: float
    x_max: float
    y_max: float


class VerdictOut(BaseModel):
    true_class_id: int | None = None
    sentinel: str | None = None
    reviewer: str
    reviewed_at: str


class DetectionOut(BaseModel):
    detection_id: str
    asset_id: str
    class_id: int
    scientific_name: str | None = None
    confidence: float
    box: BoxOut
    model_version: str
    verdict: VerdictOut | None = None
    image_url: str
    # intrinsic image size, so clients can place box overlays exactly
    asset_width: int | None = None
    asset_height: int | None = None

    @classmethod
    def from_detection(
        cls,
        det: Detection,
        catalog: SpeciesCatalog,
        asset_size: tuple[int, int] | None = None,
    ) -> "DetectionOut":
        verdict = None
        if det.verdict is not None:
            verdict = VerdictOut(
                true_class_id=det.verdict.true_class_id,
                sentinel=det.verdict.sentinel.value if det.verdict.sentinel else None,
                reviewer=det.verdict.reviewer,
                reviewed_at=to_rfc3339(det.verdict.reviewed_at),
            )
        return cls(
            detection_id=det.detection_id,
            asset_id=det.asset_id,
            class_id=det.class_id,
            scientific_name=catalog.scientific_name(det.class_id)
            if det.class_id in catalog
            else None,
            confidence=det.confidence,
            box=BoxOut(
                x_min=det.box.x_min,
                y_min=det.box.y_min,
                x_max=det.box.x_max,
                y_max=det.box.y_max,
            ),
            model_version=det.model_version,
            verdict=verdict,
            image_url=f"/api/assets/{det.asset_id}/image",
            asset_width=asset_size[0] if asset_size else None,
            asset_height=asset_size[1] if asset_size else None,
        )


class DetectionPageOut(BaseModel):
    items: list[DetectionOut]
    next_cursor: str | None = None


class VerifyRequest(BaseModel):
    true_class_id: int | None = None
    sentinel: Literal["BLANK", "NO_GOOD"] | None = None
    reviewer: str = "api"


class BatchFileResult(BaseModel):
    filename: str
    asset_id: str | None = None
    duplicate: bool = False
    detections: list[DetectionOut] | None = None
    error: ApiErrorBody | None = None


class BatchUploadOut(BaseModel):
    results: list[BatchFileResult]


class CameraIn(BaseModel):
    camera_id: str = Field(min_length=1)
    name: str = ""
    smtp_sender: str = Field(min_length=3)
    ir_sensitivity: Literal["low", "medium", "high"] = "medium"
    location: tuple[float, float] | None = None
    active: bool = True

    def to_model(self) -> CameraSource:
        return CameraSource(
            camera_id=self.camera_id,
            name=self.name or self.camera_id,
            smtp_sender=self.smtp_sender,
            ir_sensitivity=IrSensitivity(self.ir_sensitivity),
            location=self.location,
            active=self.active,
        )


class CameraOut(CameraIn):
    @classmethod
    def from_model(cls, camera: CameraSource) -> "CameraOut":
        return cls(
            camera_id=camera.camera_id,
            name=camera.name,
            smtp_sender=camera.smtp_sender,
            ir_sensitivity=camera.ir_sensitivity.value,
            location=camera.location,
            active=camera.active,
        )


class RuleIn(BaseModel):
    rule_id: str | None = None
    name: str = ""
    class_ids: list[int] = Field(min_length=1)
    min_confidence: float = Field(ge=0.0, le=1.0)
    cameras: list[str] | None = None
    cooldown_seconds: int = Field(default=300, ge=0)
    sink_kind: Literal["webhook", "email", "log"] = "log"
    sink_target: str = ""
    enabled: bool = True

    def to_model(self, rule_id: str) -> AlertRule:
        return AlertRule(
            rule_id=rule_id,
            name=self.name,
            class_ids=frozenset(self.class_ids),
            min_confidence=self.min_confidence,
            cameras=frozenset(self.cameras) if self.cameras is not None else None,
            cooldown_seconds=self.cooldown_seconds,
            sink=SinkSpec(kind=SinkKind(self.sink_kind), target=self.sink_target),
            enabled=self.enabled,
        )


class RuleOut(RuleIn):
    rule_id: str

    @classmethod
    def from_model(cls, rule: AlertRule) -> "RuleOut":
        return cls(
            rule_id=rule.rule_id,
            name=rule.name,
            class_ids=sorted(rule.class_ids),
            min_confidence=rule.min_confidence,
            cameras=sorted(rule.cameras) if rule.cameras is not None else None,
            cooldown_seconds=rule.cooldown_seconds,
            sink_kind=rule.sink.kind.value,
            sink_target=rule.sink.target,
            enabled=rule.enabled,
        )


class AlertOut(BaseModel):
    alert_id: str
    rule_id: str
    detection_id: str
    camera_id: str | None
    class_id: int
    fired_at: str
    delivery_status: str
    attempts: int

    @classmethod
    def from_model(cls, alert: AlertEvent) -> "AlertOut":
        return cls(
            alert_id=alert.alert_id,
            rule_id=alert.rule_id,
            detection_id=alert.detection_id,
            camera_id=alert.camera_id,
            class_id=alert.class_id,
            fired_at=to_rfc3339(alert.fired_at),
            delivery_status=alert.delivery_status.value,
            attempts=alert.attempts,
        )


class CatalogEntryOut(BaseModel):
    class_id: int
    scientific_name: str
    common_name: str


def verdict_from_request(body: VerifyRequest) -> HumanVerdict:
    from ..models import VerdictSentinel, utcnow

    return HumanVerdict(
        reviewer=body.reviewer,
        reviewed_at=utcnow(),
        true_class_id=body.true_class_id,
        sentinel=VerdictSentinel(body.sentinel) if body.sentinel else None,
    )
