"""Long-running service wiring: store, queue, SMTP listener, API, workers.

``ServiceRuntime`` owns every moving part of a deployment. The SMTP
handler only parses and durably enqueues; detection, persistence and
alert evaluation happen on the queue workers; delivery has its own
worker so slow sinks cannot back up ingestion.
"""

from __future__ import annotations

import email.parser
import logging
import threading
from pathlib import Path

import uvicorn

from .catalog import SpeciesCatalog, default_catalog
from .config import AppConfig
from .errors import NoAttachment, OversizeAttachment, QueueFull, UnknownSender
from .inference.detector import DetectorConfig
from .inference.mock import MockBackend
from .inference.remote import RemoteBackend
from .ingest.mail import accept_message
from .ingest.queue import DurableQueue
from .ingest.smtp import SmtpEnvelope, SmtpServer
from .ingest.workers import DeliveryWorker, QueueProcessor
from .models import new_id, utcnow
from .service.app import AppState, create_app
from .store.database import EventStore

log = logging.getLogger("camtrap.runtime")


def build_backend(config: AppConfig):
    if config.detector == "remote":
        return RemoteBackend(
            DetectorConfig(
                model_name=config.model_name,
                model_version=config.model_version,
                confidence_threshold=config.confidence_threshold,
                endpoint=config.detector_endpoint,
            )
        )
    if config.mock_fixture:
        return MockBackend.from_fixture(config.mock_fixture)
    return MockBackend()


def load_catalog(config: AppConfig) -> SpeciesCatalog:
    if config.catalog_file:
        return SpeciesCatalog.load(config.catalog_file)
    return default_catalog()


class ServiceRuntime:
    def __init__(self, config: AppConfig, static_dir: str | Path | None = None):
        self.config = config
        self.catalog = load_catalog(config)
        data_dir = Path(config.data_dir)
        data_dir.mkdir(parents=True, exist_ok=True)
        self.store = EventStore(data_dir / "store")
        self.queue = DurableQueue(config.queue_path, capacity=config.queue_capacity)
        self.quarantine_dir = data_dir / "quarantine"
        self.quarantine_dir.mkdir(parents=True, exist_ok=True)
        self.backend = build_backend(config)
        self.detector_config = DetectorConfig(
            model_name=config.model_name,
            model_version=config.model_version,
            confidence_threshold=config.confidence_threshold,
            endpoint=config.detector_endpoint,
        )

        api_host, api_port = config.api_host_port
        self.delivery = DeliveryWorker(
            self.store,
            self.catalog,
            image_url_base=f"http://{api_host}:{api_port}",
            email_relay=config.email_relay_host_port,
        )
        self.processor = QueueProcessor(
            self.store,
            self.queue,
            self.backend,
            self.catalog,
            self.detector_config,
            workers=config.ingest_workers,
            wake_delivery=self.delivery.wake,
        )

        smtp_host, smtp_port = config.smtp_host_port
        tls_context = None
        if config.smtp_tls_cert:
            import ssl

            tls_context = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
            tls_context.load_cert_chain(config.smtp_tls_cert, config.smtp_tls_key)
        credentials = (
            (config.smtp_auth_user, config.smtp_auth_password)
            if config.smtp_auth_user
            else None
        )
        self.smtp = SmtpServer(
            handler=self.handle_envelope,
            host=smtp_host,
            port=smtp_port,
            max_message_bytes=int(config.max_attachment_mb * 1024 * 1024 * 2),
            tls_context=tls_context,
            credentials=credentials,
        )

        self.state = AppState(
            store=self.store,
            backend=self.backend,
            catalog=self.catalog,
            detector_config=self.detector_config,
            max_attachment_mb=config.max_attachment_mb,
            auth_token=config.auth_token,
            allow_anon_read=config.allow_anon_read,
            wake_delivery=self.delivery.wake,
        )
        self.app = create_app(self.state, static_dir=static_dir)
        self._api_server = uvicorn.Server(
            uvicorn.Config(self.app, host=api_host, port=api_port, log_level="warning")
        )
        self._api_thread: threading.Thread | None = None

    # -- SMTP path ---------------------------------------------------------

    def _quarantine(self, envelope: SmtpEnvelope, reason: str) -> None:
        entry = new_id("quar")
        eml_path = self.quarantine_dir / f"{entry}.eml"
        eml_path.write_bytes(envelope.data)
        (self.quarantine_dir / f"{entry}.reason.txt").write_text(reason + "\n", encoding="utf-8")
        headers = email.parser.BytesParser().parsebytes(envelope.data, headersonly=True)
        self.store.add_quarantine(
            reason=reason,
            sender=envelope.mail_from,
            message_id=(headers.get("Message-ID") or "").strip(),
            eml_path=str(eml_path),
        )

    def handle_envelope(self, envelope: SmtpEnvelope) -> tuple[int, str]:
        received = utcnow()
        try:
            events = accept_message(
                envelope.data,
                self.store,
                envelope_sender=envelope.mail_from,
                received_at=received,
                max_attachment_mb=self.config.max_attachment_mb,
            )
        except UnknownSender as exc:
            self._quarantine(envelope, exc.code)
            return 250, "accepted; quarantined (unknown sender)"
        except NoAttachment as exc:
            self._quarantine(envelope, exc.code)
            return 250, "accepted; quarantined (no attachment)"
        except OversizeAttachment:
            return 552, "attachment exceeds the configured size cap"
        except Exception:
            log.exception("failed to parse inbound message")
            return 451, "local error in processing"

        message_id = events[0].message_id
        if self.store.is_message_seen(message_id):
            return 250, "duplicate message ignored"
        try:
            for event in events:
                self.queue.put(event)
        except QueueFull:
            return 451, "queue full; try again later"
        # only after the durable enqueue: a crash in between replays safely
        self.store.mark_message_seen(message_id)
        self.processor.notify()
        return 250, f"queued {len(events)} event(s)"

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        self.processor.start()
        self.delivery.start()
        self.smtp.start()
        self._api_thread = threading.Thread(
            target=self._api_server.run, name="api-server", daemon=True
        )
        self._api_thread.start()
        log.info(
            "service up: SMTP on %s, API on %s", self.config.smtp_bind, self.config.api_bind
        )

    def stop(self) -> None:
        self.smtp.stop()
        self.processor.stop()
        self.delivery.stop()
        self._api_server.should_exit = True
        if self._api_thread:
            self._api_thread.join(timeout=10)

    def wait(self) -> None:
        try:
            while True:
                threading.Event().wait(3600)
        except KeyboardInterrupt:
            self.stop()
