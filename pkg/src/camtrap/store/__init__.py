"""Durable persistence: SQLite metadata plus content-addressed blobs."""

from .blobs import BlobStore
from .database import BlankStats, DetectionPage, EventStore, IngestResult

__all__ = ["BlankStats", "BlobStore", "DetectionPage", "EventStore", "IngestResult"]
