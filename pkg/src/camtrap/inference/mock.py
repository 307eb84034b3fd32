"""Deterministic table-driven backend for tests and offline demo runs.

The fixture file maps image content hashes to output rows, one row per
line:

    content_hash_hex x1 y1 x2 y2 score class_index

Unknown hashes produce an empty output (a blank image).
"""

from __future__ import annotations

from pathlib import Path

from .detector import OUTPUT_ROWS, RawModelOutput, RawRow


class MockBackend:
    def __init__(self, table: dict[str, list[RawRow]] | None = None, capacity: int = OUTPUT_ROWS):
        self._table = {k: list(v) for k, v in (table or {}).items()}
        self._capacity = capacity

    @classmethod
    def from_fixture(cls, path: str | Path, capacity: int = OUTPUT_ROWS) -> "MockBackend":
        table: dict[str, list[RawRow]] = {}
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 7:
                raise ValueError(f"{path}:{lineno}: expected 7 fields")
            table.setdefault(parts[0], []).append(
                RawRow(
                    x1=float(parts[1]),
                    y1=float(parts[2]),
                    x2=float(parts[3]),
                    y2=float(parts[4]),
                    score=float(parts[5]),
                    class_index=int(parts[6]),
                )
            )
        return cls(table, capacity=capacity)

    def add(self, content_hash: str, row: RawRow) -> None:
        self._table.setdefault(content_hash, []).append(row)

    def infer(self, content_hash: str, tensor) -> RawModelOutput:
        rows = self._table.get(content_hash, [])
        return RawModelOutput(rows=tuple(rows), capacity=self._capacity)
