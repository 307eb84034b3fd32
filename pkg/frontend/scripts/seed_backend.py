#!/usr/bin/env python3
"""Boot a camtrap backend seeded with the field-trial confusion counts.

Used by the console's integration tests and by the fixture recorder. The
store receives one asset per confusion cell whose detections carry the
cell's predicted class, each verified with the cell's actual class, plus
one extra unverified class-22 detection for exercising the review flow.
Prints READY once the API answers; runs until terminated.
"""

from __future__ import annotations

import argparse
import io
import sys
import time

import httpx
from PIL import Image

from camtrap.boxes import BoundingBox
from camtrap.config import AppConfig
from camtrap.evaluation.reference import FIELD_TRIAL_MATRIX
from camtrap.models import Detection, HumanVerdict, new_id, utcnow
from camtrap.runtime import ServiceRuntime


def tiny_jpeg(seed: int) -> bytes:
    img = Image.new("RGB", (64, 48), ((seed * 37) % 256, (seed * 91) % 256, 60))
    buf = io.BytesIO()
    img.save(buf, format="JPEG")
    return buf.getvalue()


def seed(runtime: ServiceRuntime) -> None:
    store = runtime.store
    seed_idx = 0
    for ai, actual in enumerate(FIELD_TRIAL_MATRIX.classes):
        for pi, predicted in enumerate(FIELD_TRIAL_MATRIX.classes):
            count = FIELD_TRIAL_MATRIX.counts[ai][pi]
            if count == 0:
                continue
            seed_idx += 1

            def factory(asset, n=count, cls=predicted):
                return [
                    Detection(
                        detection_id=new_id("det"),
                        asset_id=asset.asset_id,
                        box=BoundingBox(4.0 + i % 7, 6.0, 40.0 + i % 7, 36.0),
                        class_id=cls,
                        confidence=0.9,
                        model_version="seeded",
                    )
                    for i in range(n)
                ]

            result = store.ingest(
                image_bytes=tiny_jpeg(seed_idx),
                detections_factory=factory,
                source="batch-upload",
                dimensions=(64, 48, None),
            )
            for det in result.detections:
                store.record_verdict(
                    det.detection_id,
                    HumanVerdict(
                        reviewer="field-reviewer",
                        reviewed_at=utcnow(),
                        true_class_id=actual,
                    ),
                )

    # one unverified detection for the review queue
    def one_det(asset):
        return [
            Detection(
                detection_id=new_id("det"),
                asset_id=asset.asset_id,
                box=BoundingBox(8.0, 8.0, 44.0, 40.0),
                class_id=22,
                confidence=0.87,
                model_version="seeded",
            )
        ]

    store.ingest(
        image_bytes=tiny_jpeg(9999),
        detections_factory=one_det,
        source="batch-upload",
        dimensions=(64, 48, None),
    )


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--api-port", type=int, required=True)
    parser.add_argument("--smtp-port", type=int, required=True)
    parser.add_argument("--data-dir", required=True)
    args = parser.parse_args()

    config = AppConfig(
        api_bind=f"127.0.0.1:{args.api_port}",
        smtp_bind=f"127.0.0.1:{args.smtp_port}",
        data_dir=args.data_dir,
        detector="mock",
    )
    runtime = ServiceRuntime(config)
    seed(runtime)
    runtime.start()

    base = f"http://127.0.0.1:{args.api_port}"
    for _ in range(100):
        try:
            if httpx.get(f"{base}/healthz", timeout=1).status_code == 200:
                break
        except httpx.HTTPError:
            time.sleep(0.1)
    print("READY", flush=True)
    try:
        runtime.wait()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
