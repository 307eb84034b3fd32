"""Field ingestion: SMTP listener, MIME extraction, durable queue, pipeline."""

from .mail import IngestEvent, accept_message
from .pipeline import ingest_image
from .queue import DurableQueue
from .smtp import SmtpEnvelope, SmtpServer

__all__ = [
    "DurableQueue",
    "IngestEvent",
    "SmtpEnvelope",
    "SmtpServer",
    "accept_message",
    "ingest_image",
]
