"""Background workers: queue consumers and the alert delivery loop.

Queue consumers take events from the durable queue and run the ingest
pipeline; the event file is removed only after the store transaction
commits. Delivery runs on its own worker so a slow or dead sink can
never stall ingestion or rule evaluation.
"""

from __future__ import annotations

import logging
import threading

from ..alerts.delivery import deliver, webhook_payload
from ..alerts.rules import DeliveryStatus
from ..catalog import SpeciesCatalog
from ..errors import CamtrapError, UndecodableImage
from ..inference.detector import DetectorBackend, DetectorConfig
from ..store.database import EventStore
from .pipeline import ingest_image
from .queue import DurableQueue

log = logging.getLogger("camtrap.workers")


class QueueProcessor:
    def __init__(
        self,
        store: EventStore,
        queue: DurableQueue,
        backend: DetectorBackend,
        catalog: SpeciesCatalog,
        config: DetectorConfig,
        workers: int = 2,
        wake_delivery=None,
    ):
        self.store = store
        self.queue = queue
        self.backend = backend
        self.catalog = catalog
        self.config = config
        self.workers = workers
        self.wake_delivery = wake_delivery
        self._stop = threading.Event()
        self._kick = threading.Event()
        self._threads: list[threading.Thread] = []

    def notify(self) -> None:
        """Hint that new work arrived (polling still catches everything)."""
        self._kick.set()

    def start(self) -> None:
        for i in range(self.workers):
            t = threading.Thread(target=self._run, name=f"ingest-worker-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self) -> None:
        self._stop.set()
        self._kick.set()
        for t in self._threads:
            t.join(timeout=10)

    def drain(self, timeout: float = 30.0) -> bool:
        """Block until the queue is empty (tests and batch runs)."""
        import time

        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            if self.queue.depth() == 0:
                return True
            time.sleep(0.05)
        return self.queue.depth() == 0

    def _run(self) -> None:
        while not self._stop.is_set():
            claimed = self.queue.claim()
            if claimed is None:
                self._kick.wait(timeout=0.2)
                self._kick.clear()
                continue
            path, event = claimed
            try:
                self.process_one(event)
            except CamtrapError as exc:
                # deterministic rejection: record and drop the event
                log.warning("event %s rejected: %s", event.event_id, exc)
                self.store.add_quarantine(
                    reason=exc.code, sender=event.camera_id, message_id=event.message_id
                )
            except Exception:
                # transient infrastructure failure: leave for retry
                log.exception("event %s failed; will retry", event.event_id)
                self.queue.release(path)
                self._stop.wait(timeout=0.5)
                continue
            self.queue.done(path)

    def process_one(self, event) -> None:
        try:
            result = ingest_image(
                store=self.store,
                backend=self.backend,
                catalog=self.catalog,
                config=self.config,
                image_bytes=event.image_bytes,
                camera_id=event.camera_id,
                received_at=event.receipt_time,
                trigger_time=event.trigger_time,
                declared_filename=event.declared_filename,
            )
        except UndecodableImage:
            raise
        if result.alerts and self.wake_delivery is not None:
            self.wake_delivery()


class DeliveryWorker:
    def __init__(
        self,
        store: EventStore,
        catalog: SpeciesCatalog,
        image_url_base: str = "http://localhost:8080",
        poll_seconds: float = 0.25,
        webhook_backoff_seconds: float = 0.5,
        email_relay: tuple[str, int] = ("localhost", 25),
    ):
        self.store = store
        self.catalog = catalog
        self.image_url_base = image_url_base.rstrip("/")
        self.poll_seconds = poll_seconds
        self.webhook_backoff_seconds = webhook_backoff_seconds
        self.email_relay = email_relay
        self._stop = threading.Event()
        self._wake = threading.Event()
        self._thread: threading.Thread | None = None

    def wake(self) -> None:
        self._wake.set()

    def start(self) -> None:
        self._thread = threading.Thread(target=self._run, name="alert-delivery", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        self._wake.set()
        if self._thread:
            self._thread.join(timeout=10)

    def deliver_pending(self) -> int:
        """One delivery sweep; returns how many alerts were attempted."""
        attempted = 0
        for alert in self.store.claim_pending_alerts():
            attempted += 1
            try:
                rule = self.store.get_rule(alert.rule_id)
                detection = self.store.get_detection(alert.detection_id)
                camera = (
                    self.store.get_camera(alert.camera_id) if alert.camera_id else None
                )
                payload = webhook_payload(
                    alert,
                    detection,
                    camera,
                    self.catalog,
                    image_url=f"{self.image_url_base}/api/assets/{detection.asset_id}/image",
                )
                result = deliver(
                    rule.sink,
                    payload,
                    backoff_seconds=self.webhook_backoff_seconds,
                    email_relay=self.email_relay,
                )
                self.store.mark_delivery(
                    alert.alert_id, result.status, result.attempts, result.detail
                )
            except Exception as exc:
                log.exception("delivery of %s failed", alert.alert_id)
                self.store.mark_delivery(
                    alert.alert_id, DeliveryStatus.FAILED, alert.attempts + 1, str(exc)
                )
        return attempted

    def _run(self) -> None:
        while not self._stop.is_set():
            self.deliver_pending()
            self._wake.wait(timeout=self.poll_seconds)
            self._wake.clear()
