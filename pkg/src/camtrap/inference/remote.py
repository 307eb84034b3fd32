"""REST client for an open-inference-protocol detection server.

One request per image: the letterboxed CHW float tensor goes up as a
single FP32 input named ``images``; the server answers with one output
named ``output0`` of shape ``[1, N, 6]`` whose rows are
``x1 y1 x2 y2 score class``. Connection failures and timeouts are retried
with exponential backoff; protocol violations are not retried.
"""

from __future__ import annotations

import json
import threading
import time

import httpx

from ..errors import BackendProtocolError, BackendUnavailable, ShapeMismatch
from .detector import DetectorConfig, RawModelOutput, RawRow

INPUT_NAME = "images"
OUTPUT_NAME = "output0"
ROW_FIELDS = 6


class InferenceTimeout(BackendUnavailable):
    """Request exceeded the configured timeout (retryable)."""

    code = "inference_timeout"


class BackendHttpError(BackendProtocolError):
    """Backend answered with a non-2xx status."""

    code = "backend_http_error"

    def __init__(self, status: int, body: str = ""):
        self.status = status
        super().__init__(f"backend returned HTTP {status}: {body[:200]}")


def infer_url(endpoint: str, model_name: str) -> str:
    return f"{endpoint.rstrip('/')}/v2/models/{model_name}/infer"


def build_request_body(tensor, config: DetectorConfig) -> bytes:
    """Serialize the request exactly as it goes on the wire."""
    size = config.input_size
    if tensor.shape != (3, size, size):
        raise ValueError(f"tensor shape {tensor.shape} != (3, {size}, {size})")
    payload = {
        "inputs": [
            {
                "name": INPUT_NAME,
                "shape": [1, 3, size, size],
                "datatype": "FP32",
                "data": tensor.ravel().tolist(),
            }
        ]
    }
    return json.dumps(payload).encode("utf-8")


def parse_response_body(body: bytes, config: DetectorConfig) -> RawModelOutput:
    try:
        doc = json.loads(body)
    except json.JSONDecodeError as exc:
        raise BackendProtocolError(f"response is not JSON: {exc}") from exc
    outputs = doc.get("outputs")
    if not isinstance(outputs, list):
        raise BackendProtocolError("response has no outputs array")
    output = next((o for o in outputs if o.get("name") == OUTPUT_NAME), None)
    if output is None:
        raise BackendProtocolError(f"no output named {OUTPUT_NAME!r}")

    expected = [1, config.max_detections, ROW_FIELDS]
    shape = output.get("shape")
    if list(shape or ()) != expected:
        raise ShapeMismatch(f"output shape {shape} != expected {expected}")
    data = output.get("data")
    if not isinstance(data, list) or len(data) != config.max_detections * ROW_FIELDS:
        raise ShapeMismatch(
            f"data length {len(data) if isinstance(data, list) else 'missing'} "
            f"!= {config.max_detections * ROW_FIELDS}"
        )

    rows = []
    for i in range(config.max_detections):
        x1, y1, x2, y2, score, cls = data[i * ROW_FIELDS : (i + 1) * ROW_FIELDS]
        if score <= 0.0:
            continue  # padding row
        rows.append(
            RawRow(
                x1=float(x1), y1=float(y1), x2=float(x2), y2=float(y2),
                score=float(score), class_index=int(cls),
            )
        )
    return RawModelOutput(rows=tuple(rows), capacity=config.max_detections)


def remote_infer(
    tensor,
    config: DetectorConfig,
    client: httpx.Client | None = None,
    backoff_seconds: float = 0.25,
) -> RawModelOutput:
    """One inference round-trip with bounded retries.

    Retries connection errors, timeouts and 5xx responses up to
    ``config.retries`` times; 4xx and malformed responses fail fast.
    """
    if not config.endpoint:
        raise ValueError("remote inference requires an endpoint")
    url = infer_url(config.endpoint, config.model_name)
    body = build_request_body(tensor, config)
    owned = client is None
    http = client or httpx.Client(timeout=config.timeout_seconds)
    last_error: Exception | None = None
    try:
        for attempt in range(config.retries):
            if attempt:
                time.sleep(backoff_seconds * 2 ** (attempt - 1))
            try:
                response = http.post(
                    url, content=body, headers={"content-type": "application/json"}
                )
            except httpx.TimeoutException as exc:
                last_error = InferenceTimeout(str(exc))
                continue
            except httpx.TransportError as exc:
                last_error = BackendUnavailable(str(exc))
                continue
            if 500 <= response.status_code < 600:
                last_error = BackendHttpError(response.status_code, response.text)
                continue
            if not 200 <= response.status_code < 300:
                raise BackendHttpError(response.status_code, response.text)
            return parse_response_body(response.content, config)
        raise last_error if last_error is not None else BackendUnavailable("no attempts made")
    finally:
        if owned:
            http.close()


class RemoteBackend:
    """DetectorBackend over the REST protocol, bounding in-flight requests."""

    def __init__(self, config: DetectorConfig, backoff_seconds: float = 0.25):
        if not config.endpoint:
            raise ValueError("remote backend requires an endpoint")
        self._config = config
        self._backoff = backoff_seconds
        self._client = httpx.Client(timeout=config.timeout_seconds)
        self._slots = threading.Semaphore(config.max_inflight)

    def infer(self, content_hash: str, tensor) -> RawModelOutput:
        with self._slots:
            return remote_infer(
                tensor, self._config, client=self._client, backoff_seconds=self._backoff
            )

    def close(self) -> None:
        self._client.close()
