"""HTTP service: FastAPI app over the store, detector and alert engine."""

from .app import AppState, create_app

__all__ = ["AppState", "create_app"]
