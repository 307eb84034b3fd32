"""Durable file-backed ingest queue.

Each event is one JSON file written via temp-file + fsync + atomic
rename, so an event either exists completely or not at all. Files are
deleted only after downstream processing commits, giving at-least-once
delivery across crashes; the store's idempotent ingest turns that into
exactly-once stored effect.
"""

from __future__ import annotations

import base64
import json
import os
import tempfile
import threading
import time
from pathlib import Path

from ..errors import QueueFull
from ..models import from_rfc3339, to_rfc3339
from .mail import IngestEvent

DEFAULT_CAPACITY = 10_000


def _encode(event: IngestEvent) -> bytes:
    doc = {
        "event_id": event.event_id,
        "camera_id": event.camera_id,
        "declared_filename": event.declared_filename,
        "message_id": event.message_id,
        "trigger_time": to_rfc3339(event.trigger_time),
        "receipt_time": to_rfc3339(event.receipt_time),
        "image_b64": base64.b64encode(event.image_bytes).decode("ascii"),
    }
    return json.dumps(doc).encode("utf-8")


def _decode(data: bytes) -> IngestEvent:
    doc = json.loads(data)
    return IngestEvent(
        event_id=doc["event_id"],
        camera_id=doc["camera_id"],
        image_bytes=base64.b64decode(doc["image_b64"]),
        declared_filename=doc["declared_filename"],
        message_id=doc["message_id"],
        trigger_time=from_rfc3339(doc["trigger_time"]),
        receipt_time=from_rfc3339(doc["receipt_time"]),
    )


class DurableQueue:
    def __init__(self, directory: str | Path, capacity: int = DEFAULT_CAPACITY):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.capacity = capacity
        self._lock = threading.Lock()
        self._claimed: set[str] = set()

    def depth(self) -> int:
        return sum(1 for _ in self.directory.glob("*.json"))

    def put(self, event: IngestEvent) -> Path:
        """Durably enqueue; raises QueueFull at capacity."""
        if self.depth() >= self.capacity:
            raise QueueFull(f"queue at capacity ({self.capacity})")
        name = f"{time.time_ns():020d}_{event.event_id}.json"
        target = self.directory / name
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(_encode(event))
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def claim(self) -> tuple[Path, IngestEvent] | None:
        """Oldest unclaimed event, or None. The file stays until done()."""
        with self._lock:
            for path in sorted(self.directory.glob("*.json")):
                key = path.name
                if key in self._claimed:
                    continue
                try:
                    event = _decode(path.read_bytes())
                except (OSError, ValueError, KeyError):
                    continue  # racing writer or another process finished it
                self._claimed.add(key)
                return path, event
        return None

    def done(self, path: Path) -> None:
        with self._lock:
            self._claimed.discard(path.name)
        try:
            path.unlink()
        except FileNotFoundError:
            pass

    def release(self, path: Path) -> None:
        """Unclaim after a transient failure so another worker can retry."""
        with self._lock:
            self._claimed.discard(path.name)

    def pending(self) -> list[Path]:
        return sorted(self.directory.glob("*.json"))
