#!/usr/bin/env python3
"""Record the golden wire fixtures for the inference REST protocol.

Run once; the outputs are committed under tests/fixtures/wire/ and the
contract tests compare live request/response bodies against them. The
request tensor comes from a solid-gray 640x640 image so the fixture
compresses well while still exercising the full tensor shape.
"""

from __future__ import annotations

import gzip
import json
from pathlib import Path

from PIL import Image

from camtrap.inference.detector import DetectorConfig
from camtrap.inference.preprocess import DecodedImage, image_tensor
from camtrap.inference.remote import ROW_FIELDS, build_request_body

import numpy as np

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "wire"


def golden_image() -> DecodedImage:
    img = Image.new("RGB", (640, 640), (113, 113, 113))
    rgb = np.asarray(img, dtype=np.uint8)
    return DecodedImage(width=640, height=640, dpi=None, rgb=rgb)


def golden_response(config: DetectorConfig) -> dict:
    rows = [[0.0] * ROW_FIELDS for _ in range(config.max_detections)]
    rows[0] = [100.0, 120.0, 300.0, 360.0, 0.91, 22.0]
    rows[1] = [10.0, 10.0, 80.0, 90.0, 0.55, 23.0]
    flat = [value for row in rows for value in row]
    return {
        "model_name": config.model_name,
        "model_version": config.model_version,
        "outputs": [
            {
                "name": "output0",
                "datatype": "FP32",
                "shape": [1, config.max_detections, ROW_FIELDS],
                "data": flat,
            }
        ],
    }


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    config = DetectorConfig()
    tensor, _ = image_tensor(golden_image(), config.input_size)
    request = build_request_body(tensor, config)
    (FIXTURE_DIR / "request_640.json.gz").write_bytes(gzip.compress(request, 9))
    response = json.dumps(golden_response(config)).encode("utf-8")
    (FIXTURE_DIR / "response_300.json").write_bytes(response)
    print(f"request: {len(request)} bytes raw")
    print(f"response: {len(response)} bytes")


if __name__ == "__main__":
    main()
