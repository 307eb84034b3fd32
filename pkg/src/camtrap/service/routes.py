"""Route handlers. All state comes from ``request.app.state.ctx``."""

from __future__ import annotations

from datetime import datetime

from fastapi import APIRouter, File, HTTPException, Query, Request, Response, UploadFile

from ..errors import (
    InvalidRange,
    OversizeAttachment,
    UndecodableImage,
    UnknownClass,
)
from ..evaluation.confusion import percent_value
from ..evaluation.deployment import deployment_report
from ..evaluation.reference import FIELD_TRIAL_REFERENCE, reconcile
from ..ingest.pipeline import ingest_image
from ..models import from_rfc3339, to_rfc3339
from .schemas import (
    AlertOut,
    ApiErrorBody,
    BatchFileResult,
    BatchUploadOut,
    CameraIn,
    CameraOut,
    CatalogEntryOut,
    DetectionOut,
    DetectionPageOut,
    RuleIn,
    RuleOut,
    VerifyRequest,
    verdict_from_request,
)

router = APIRouter(prefix="/api")


def _ctx(request: Request):
    return request.app.state.ctx


def _parse_time(value: str | None, name: str) -> datetime | None:
    if value is None or value == "":
        return None
    try:
        return from_rfc3339(value)
    except ValueError:
        raise InvalidRange(f"{name} is not an RFC 3339 timestamp: {value!r}") from None


def _detections_out(ctx, detections) -> list[DetectionOut]:
    """DetectionOut list with intrinsic asset sizes attached (cached per call)."""
    sizes: dict[str, tuple[int, int]] = {}
    out = []
    for det in detections:
        if det.asset_id not in sizes:
            asset = ctx.store.get_asset(det.asset_id)
            sizes[det.asset_id] = (asset.width, asset.height)
        out.append(DetectionOut.from_detection(det, ctx.catalog, sizes[det.asset_id]))
    return out


# -- ingestion -------------------------------------------------------------


@router.post("/images")
async def upload_images(
    request: Request, files: list[UploadFile] = File(default=[])
) -> BatchUploadOut:
    ctx = _ctx(request)
    if not files:
        raise HTTPException(status_code=400, detail="no files")
    cap = int(ctx.max_attachment_mb * 1024 * 1024)
    payloads: list[tuple[str, bytes]] = []
    for upload in files:
        data = await upload.read()
        if len(data) > cap:
            raise OversizeAttachment(
                f"{upload.filename or 'file'} exceeds {ctx.max_attachment_mb} MB cap"
            )
        payloads.append((upload.filename or "upload", data))

    results: list[BatchFileResult] = []
    fired_any = False
    for filename, data in payloads:
        try:
            outcome = ctx.ingest_bytes(data, declared_filename=filename)
        except UndecodableImage as exc:
            results.append(
                BatchFileResult(
                    filename=filename,
                    error=ApiErrorBody(
                        http_status=422, code=exc.code, message=str(exc), request_id=""
                    ),
                )
            )
            continue
        fired_any = fired_any or bool(outcome.alerts)
        results.append(
            BatchFileResult(
                filename=filename,
                asset_id=outcome.asset.asset_id,
                duplicate=outcome.duplicate,
                detections=_detections_out(ctx, outcome.detections),
            )
        )
    if fired_any and ctx.wake_delivery is not None:
        ctx.wake_delivery()
    return BatchUploadOut(results=results)


# -- detections and assets ---------------------------------------------------


@router.get("/detections")
def list_detections(
    request: Request,
    camera_id: str | None = None,
    class_id: int | None = None,
    received_from: str | None = Query(default=None, alias="from"),
    received_to: str | None = Query(default=None, alias="to"),
    min_confidence: float | None = None,
    verified: bool | None = None,
    cursor: str | None = None,
    limit: int = Query(default=50, ge=1, le=500),
) -> DetectionPageOut:
    ctx = _ctx(request)
    page = ctx.store.query_detections(
        camera_id=camera_id,
        class_id=class_id,
        received_from=_parse_time(received_from, "from"),
        received_to=_parse_time(received_to, "to"),
        min_confidence=min_confidence,
        verified=verified,
        cursor=cursor,
        limit=limit,
    )
    return DetectionPageOut(
        items=_detections_out(ctx, page.items),
        next_cursor=page.next_cursor,
    )


@router.get("/detections/{detection_id}")
def get_detection(request: Request, detection_id: str) -> DetectionOut:
    ctx = _ctx(request)
    return _detections_out(ctx, [ctx.store.get_detection(detection_id)])[0]


@router.post("/detections/{detection_id}/verify")
def verify_detection(request: Request, detection_id: str, body: VerifyRequest) -> DetectionOut:
    ctx = _ctx(request)
    if (body.true_class_id is None) == (body.sentinel is None):
        raise UnknownClass("provide exactly one of true_class_id or sentinel")
    if body.true_class_id is not None and body.true_class_id not in ctx.catalog:
        raise UnknownClass(f"class {body.true_class_id} not in catalog")
    updated = ctx.store.record_verdict(detection_id, verdict_from_request(body))
    return _detections_out(ctx, [updated])[0]


@router.get("/assets/{asset_id}/image")
def asset_image(request: Request, asset_id: str) -> Response:
    ctx = _ctx(request)
    data = ctx.store.get_image_bytes(asset_id)
    media_type = "image/png" if data.startswith(b"\x89PNG") else "image/jpeg"
    return Response(
        content=data,
        media_type=media_type,
        headers={"cache-control": "public, max-age=31536000, immutable"},
    )


# -- cameras ------------------------------------------------------------------


@router.get("/cameras")
def list_cameras(request: Request) -> list[CameraOut]:
    return [CameraOut.from_model(c) for c in _ctx(request).store.list_cameras()]


@router.post("/cameras", status_code=201)
def create_camera(request: Request, body: CameraIn) -> CameraOut:
    camera = _ctx(request).store.put_camera(body.to_model())
    return CameraOut.from_model(camera)


@router.get("/cameras/{camera_id}")
def get_camera(request: Request, camera_id: str) -> CameraOut:
    return CameraOut.from_model(_ctx(request).store.get_camera(camera_id))


@router.put("/cameras/{camera_id}")
def update_camera(request: Request, camera_id: str, body: CameraIn) -> CameraOut:
    ctx = _ctx(request)
    ctx.store.get_camera(camera_id)  # 404 on unknown id
    camera = body.to_model()
    if camera.camera_id != camera_id:
        raise InvalidRange("camera_id in body must match the path")
    return CameraOut.from_model(ctx.store.put_camera(camera))


@router.delete("/cameras/{camera_id}", status_code=204)
def delete_camera(request: Request, camera_id: str) -> Response:
    _ctx(request).store.delete_camera(camera_id)
    return Response(status_code=204)


# -- alert rules ---------------------------------------------------------------


@router.get("/alert-rules")
def list_rules(request: Request) -> list[RuleOut]:
    return [RuleOut.from_model(r) for r in _ctx(request).store.list_rules()]


@router.post("/alert-rules", status_code=201)
def create_rule(request: Request, body: RuleIn) -> RuleOut:
    from ..models import new_id

    rule = body.to_model(body.rule_id or new_id("rule"))
    return RuleOut.from_model(_ctx(request).store.put_rule(rule))


@router.get("/alert-rules/{rule_id}")
def get_rule(request: Request, rule_id: str) -> RuleOut:
    return RuleOut.from_model(_ctx(request).store.get_rule(rule_id))


@router.put("/alert-rules/{rule_id}")
def update_rule(request: Request, rule_id: str, body: RuleIn) -> RuleOut:
    ctx = _ctx(request)
    ctx.store.get_rule(rule_id)  # 404 on unknown id
    return RuleOut.from_model(ctx.store.put_rule(body.to_model(rule_id)))


@router.delete("/alert-rules/{rule_id}", status_code=204)
def delete_rule(request: Request, rule_id: str) -> Response:
    _ctx(request).store.delete_rule(rule_id)
    return Response(status_code=204)


@router.get("/alerts")
def list_alerts(request: Request, limit: int = Query(default=100, ge=1, le=500)) -> list[AlertOut]:
    return [AlertOut.from_model(a) for a in _ctx(request).store.list_alerts(limit=limit)]


# -- catalog --------------------------------------------------------------------


@router.get("/catalog")
def get_catalog(request: Request) -> list[CatalogEntryOut]:
    return [
        CatalogEntryOut(
            class_id=e.class_id, scientific_name=e.scientific_name, common_name=e.common_name
        )
        for e in _ctx(request).catalog.entries
    ]


# -- reports ----------------------------------------------------------------------


def _metrics_payload(ctx, received_from, received_to, include_reference: bool) -> dict:
    detections = ctx.store.detections_in_range(received_from, received_to)
    report = deployment_report(detections)
    classes = []
    for class_id, m in sorted(report.per_class.items()):
        classes.append(
            {
                "class_id": class_id,
                "scientific_name": ctx.catalog.scientific_name(class_id)
                if class_id in ctx.catalog
                else None,
                "tp": m.tp,
                "fp": m.fp,
                "tn": m.tn,
                "fn": m.fn,
                "accuracy": percent_value(m.accuracy),
                "precision": percent_value(m.precision),
                "sensitivity": percent_value(m.recall),
                "specificity": percent_value(m.specificity),
                "f1": percent_value(m.f1),
            }
        )
    payload = {
        "from": to_rfc3339(received_from) if received_from else None,
        "to": to_rfc3339(received_to) if received_to else None,
        "evaluated": report.evaluated,
        "unverified_excluded": report.unverified,
        "no_good_excluded": report.excluded_no_good,
        "classes": classes,
        "averages": None,
    }
    if report.averages is not None:
        a = report.averages
        payload["averages"] = {
            "policy": a.policy.value,
            "accuracy": percent_value(a.accuracy),
            "precision": percent_value(a.precision),
            "sensitivity": percent_value(a.recall),
            "specificity": percent_value(a.specificity),
            "f1": percent_value(a.f1),
        }
    if include_reference and report.matrix is not None:
        reconciliation = reconcile(report.matrix, FIELD_TRIAL_REFERENCE, ctx.catalog)
        payload["reference"] = [
            {
                "scope": row.scope,
                "metric": row.metric,
                "reported": row.reported_pct,
                "derived": percent_value(row.derived),
                "consistent": row.consistent,
            }
            for row in reconciliation.rows
        ]
    return payload


@router.get("/reports/metrics")
def metrics_report(
    request: Request,
    received_from: str | None = Query(default=None, alias="from"),
    received_to: str | None = Query(default=None, alias="to"),
    reference: str | None = None,
) -> dict:
    ctx = _ctx(request)
    return _metrics_payload(
        ctx,
        _parse_time(received_from, "from"),
        _parse_time(received_to, "to"),
        include_reference=reference == "builtin",
    )


@router.get("/reports/confusion")
def confusion_report(
    request: Request,
    received_from: str | None = Query(default=None, alias="from"),
    received_to: str | None = Query(default=None, alias="to"),
) -> dict:
    ctx = _ctx(request)
    detections = ctx.store.detections_in_range(
        _parse_time(received_from, "from"), _parse_time(received_to, "to")
    )
    report = deployment_report(detections)
    if report.matrix is None:
        return {
            "classes": [],
            "matrix": [],
            "background_row": None,
            "row_totals": [],
            "col_totals": [],
            "grand_total": 0,
            "unverified_excluded": report.unverified,
            "no_good_excluded": report.excluded_no_good,
        }
    cm = report.matrix
    col_totals = [
        sum(cm.counts[a][p] for a in range(len(cm.classes)))
        + (cm.background_row[p] if cm.background_row is not None else 0)
        for p in range(len(cm.classes))
    ]
    return {
        "classes": [
            {
                "class_id": c,
                "scientific_name": ctx.catalog.scientific_name(c)
                if c in ctx.catalog
                else None,
            }
            for c in cm.classes
        ],
        "matrix": [list(row) for row in cm.counts],
        "background_row": list(cm.background_row) if cm.background_row is not None else None,
        "row_totals": [sum(row) for row in cm.counts],
        "col_totals": col_totals,
        "grand_total": cm.grand_total,
        "unverified_excluded": report.unverified,
        "no_good_excluded": report.excluded_no_good,
    }


@router.get("/reports/blanks")
def blanks_report(
    request: Request,
    received_from: str | None = Query(default=None, alias="from"),
    received_to: str | None = Query(default=None, alias="to"),
) -> dict:
    stats = _ctx(request).store.blank_stats(
        _parse_time(received_from, "from"), _parse_time(received_to, "to")
    )
    return {
        "total_assets": stats.total_assets,
        "blank_assets": stats.blank_assets,
        "blank_fraction": stats.blank_fraction,
    }


@router.get("/quarantine")
def list_quarantine(request: Request) -> list[dict]:
    entries = _ctx(request).store.list_quarantine()
    return [
        {**e, "received_at": to_rfc3339(e["received_at"]) if e["received_at"] else None}
        for e in entries
    ]
