"""The shared ingest path: bytes in, stored asset + detections + alerts out.

SMTP deliveries and API batch uploads both funnel through
:func:`ingest_image`, so the two paths are behaviorally identical for the
same image bytes.
"""

from __future__ import annotations

import logging
from datetime import datetime

from ..catalog import SpeciesCatalog
from ..inference.detector import DetectorBackend, DetectorConfig, detect
from ..inference.preprocess import decode_image
from ..models import BATCH_UPLOAD
from ..store.database import EventStore, IngestResult

log = logging.getLogger("camtrap.ingest")


def ingest_image(
    store: EventStore,
    backend: DetectorBackend,
    catalog: SpeciesCatalog,
    config: DetectorConfig,
    image_bytes: bytes,
    camera_id: str | None = None,
    received_at: datetime | None = None,
    trigger_time: datetime | None = None,
    declared_filename: str | None = None,
) -> IngestResult:
    """Decode, detect, persist and evaluate alerts for one image.

    Raises UndecodableImage before anything is stored. Duplicate bytes
    from the same source inside the dedup window return the original
    records without rerunning detection.
    """
    decoded = decode_image(image_bytes)
    source = camera_id if camera_id is not None else BATCH_UPLOAD
    rules = store.list_rules(enabled_only=True)

    def detections_factory(asset):
        return detect(asset, image_bytes, backend, catalog, config)

    result = store.ingest(
        image_bytes=image_bytes,
        detections_factory=detections_factory,
        source=source,
        camera_id=camera_id,
        received_at=received_at,
        trigger_time=trigger_time,
        declared_filename=declared_filename,
        dimensions=(decoded.width, decoded.height, decoded.dpi),
        rules=rules,
    )
    if result.duplicate:
        log.info("duplicate image for %s, kept %s", source, result.asset.asset_id)
    return result
