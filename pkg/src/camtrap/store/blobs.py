"""Content-addressed blob directory for original image bytes.

Layout: ``blobs/<first two hash hex chars>/<hash>.jpg``. Writes go
through a temp file and an atomic rename, so a half-written blob can
never be observed under its final name.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from ..models import content_hash


class BlobStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, digest: str) -> Path:
        return self.root / digest[:2] / f"{digest}.jpg"

    def storage_key(self, digest: str) -> str:
        return f"blobs/{digest[:2]}/{digest}.jpg"

    def put(self, data: bytes) -> str:
        """Store bytes under their own hash; idempotent. Returns the digest."""
        digest = content_hash(data)
        target = self.path_for(digest)
        if target.exists():
            return digest
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return digest

    def get(self, digest: str) -> bytes:
        return self.path_for(digest).read_bytes()

    def has(self, digest: str) -> bool:
        return self.path_for(digest).exists()
