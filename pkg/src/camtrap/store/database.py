"""Durable platform state: assets, detections, verdicts, cameras, rules,
alerts and quarantine records, backed by SQLite plus a content-addressed
blob directory.

Writes are serialized (one write lock, immediate transactions) and every
asset commits atomically together with its detections and any alerts its
detections fired - after a crash the group is either fully there or not
at all. Ingestion is idempotent on (source, content hash) inside a 24 h
window, which closes the queue's at-least-once delivery to exactly-once
stored effect.
"""

from __future__ import annotations

import base64
import json
import sqlite3
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

from ..alerts.rules import (
    AlertEvent,
    AlertRule,
    DeliveryStatus,
    RecentAlert,
    SinkKind,
    SinkSpec,
    evaluate,
)
from ..boxes import BoundingBox
from ..errors import (
    BadCursor,
    IntegrityViolation,
    UnknownAsset,
    UnknownCamera,
    UnknownDetection,
    UnknownRule,
)
from ..models import (
    BATCH_UPLOAD,
    CameraSource,
    Detection,
    HumanVerdict,
    ImageAsset,
    IrSensitivity,
    VerdictSentinel,
    new_id,
    utcnow,
)
from .blobs import BlobStore

DEDUP_WINDOW = timedelta(hours=24)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS assets (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    asset_id TEXT UNIQUE NOT NULL,
    content_hash TEXT NOT NULL,
    width INTEGER NOT NULL,
    height INTEGER NOT NULL,
    dpi INTEGER,
    source TEXT NOT NULL,
    camera_id TEXT,
    received_at_us INTEGER NOT NULL,
    trigger_time_us INTEGER,
    storage_key TEXT NOT NULL,
    declared_filename TEXT,
    blank INTEGER NOT NULL DEFAULT 0
);
CREATE INDEX IF NOT EXISTS assets_dedup ON assets(source, content_hash, received_at_us);
CREATE INDEX IF NOT EXISTS assets_received ON assets(received_at_us);

CREATE TABLE IF NOT EXISTS detections (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    detection_id TEXT UNIQUE NOT NULL,
    asset_id TEXT NOT NULL REFERENCES assets(asset_id),
    class_id INTEGER NOT NULL,
    confidence REAL NOT NULL,
    x_min REAL NOT NULL,
    y_min REAL NOT NULL,
    x_max REAL NOT NULL,
    y_max REAL NOT NULL,
    model_version TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS detections_asset ON detections(asset_id);
CREATE INDEX IF NOT EXISTS detections_class ON detections(class_id);

CREATE TABLE IF NOT EXISTS verdicts (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    detection_id TEXT NOT NULL REFERENCES detections(detection_id),
    true_class_id INTEGER,
    sentinel TEXT,
    reviewer TEXT NOT NULL,
    reviewed_at_us INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS verdicts_detection ON verdicts(detection_id);

CREATE TABLE IF NOT EXISTS cameras (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    camera_id TEXT UNIQUE NOT NULL,
    name TEXT NOT NULL,
    smtp_sender TEXT NOT NULL,
    ir_sensitivity TEXT NOT NULL,
    lat REAL,
    lon REAL,
    active INTEGER NOT NULL DEFAULT 1
);

CREATE TABLE IF NOT EXISTS alert_rules (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    rule_id TEXT UNIQUE NOT NULL,
    name TEXT NOT NULL DEFAULT '',
    class_ids TEXT NOT NULL,
    min_confidence REAL NOT NULL,
    cameras TEXT,
    cooldown_seconds INTEGER NOT NULL,
    sink_kind TEXT NOT NULL,
    sink_target TEXT NOT NULL DEFAULT '',
    enabled INTEGER NOT NULL DEFAULT 1
);

CREATE TABLE IF NOT EXISTS alerts (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    alert_id TEXT UNIQUE NOT NULL,
    rule_id TEXT NOT NULL REFERENCES alert_rules(rule_id),
    detection_id TEXT NOT NULL REFERENCES detections(detection_id),
    camera_id TEXT,
    class_id INTEGER NOT NULL,
    fired_at_us INTEGER NOT NULL,
    delivery_status TEXT NOT NULL DEFAULT 'pending',
    attempts INTEGER NOT NULL DEFAULT 0,
    detail TEXT NOT NULL DEFAULT '',
    UNIQUE(rule_id, detection_id)
);
CREATE INDEX IF NOT EXISTS alerts_cooldown ON alerts(rule_id, camera_id, class_id, fired_at_us);

CREATE TABLE IF NOT EXISTS quarantine (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    entry_id TEXT UNIQUE NOT NULL,
    reason TEXT NOT NULL,
    sender TEXT,
    message_id TEXT,
    received_at_us INTEGER NOT NULL,
    eml_path TEXT
);

CREATE TABLE IF NOT EXISTS seen_messages (
    message_id TEXT PRIMARY KEY,
    first_seen_us INTEGER NOT NULL
);
"""


def _us(ts: datetime | None) -> int | None:
    if ts is None:
        return None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return int(ts.timestamp() * 1_000_000)


def _dt(us: int | None) -> datetime | None:
    if us is None:
        return None
    return datetime.fromtimestamp(us / 1_000_000, tz=timezone.utc)


@dataclass(frozen=True)
class IngestResult:
    asset: ImageAsset
    detections: tuple[Detection, ...]
    alerts: tuple[AlertEvent, ...]
    duplicate: bool


@dataclass(frozen=True)
class DetectionPage:
    items: tuple[Detection, ...]
    next_cursor: str | None


@dataclass(frozen=True)
class BlankStats:
    total_assets: int
    blank_assets: int

    @property
    def blank_fraction(self) -> float | None:
        if self.total_assets == 0:
            return None
        return self.blank_assets / self.total_assets


class EventStore:
    """Single-node store; safe for concurrent readers and serialized writers."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.blobs = BlobStore(self.root / "blobs")
        self._db_path = self.root / "camtrap.sqlite3"
        self._write_lock = threading.RLock()
        self._local = threading.local()
        with self._write_lock:
            conn = self._conn()
            conn.executescript(_SCHEMA)
            conn.commit()

    def _conn(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = sqlite3.connect(self._db_path, timeout=30.0)
            conn.execute("PRAGMA journal_mode=WAL")
            conn.execute("PRAGMA foreign_keys=ON")
            conn.execute("PRAGMA synchronous=NORMAL")
            conn.row_factory = sqlite3.Row
            self._local.conn = conn
        return conn

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None

    # -- cameras ---------------------------------------------------------

    def put_camera(self, camera: CameraSource) -> CameraSource:
        with self._write_lock, self._conn() as conn:
            if camera.active:
                clash = conn.execute(
                    "SELECT camera_id FROM cameras WHERE smtp_sender = ? AND active = 1 "
                    "AND camera_id != ?",
                    (camera.smtp_sender.lower(), camera.camera_id),
                ).fetchone()
                if clash:
                    raise IntegrityViolation(
                        f"sender {camera.smtp_sender!r} already bound to {clash['camera_id']}"
                    )
            conn.execute(
                "INSERT INTO cameras(camera_id, name, smtp_sender, ir_sensitivity, lat, lon, active) "
                "VALUES (?, ?, ?, ?, ?, ?, ?) "
                "ON CONFLICT(camera_id) DO UPDATE SET name=excluded.name, "
                "smtp_sender=excluded.smtp_sender, ir_sensitivity=excluded.ir_sensitivity, "
                "lat=excluded.lat, lon=excluded.lon, active=excluded.active",
                (
                    camera.camera_id,
                    camera.name,
                    camera.smtp_sender.lower(),
                    camera.ir_sensitivity.value,
                    camera.location[0] if camera.location else None,
                    camera.location[1] if camera.location else None,
                    1 if camera.active else 0,
                ),
            )
        return camera

    @staticmethod
    def _camera_from_row(row: sqlite3.Row) -> CameraSource:
        location = (row["lat"], row["lon"]) if row["lat"] is not None else None
        return CameraSource(
            camera_id=row["camera_id"],
            name=row["name"],
            smtp_sender=row["smtp_sender"],
            ir_sensitivity=IrSensitivity(row["ir_sensitivity"]),
            location=location,
            active=bool(row["active"]),
        )

    def get_camera(self, camera_id: str) -> CameraSource:
        row = self._conn().execute(
            "SELECT * FROM cameras WHERE camera_id = ?", (camera_id,)
        ).fetchone()
        if row is None:
            raise UnknownCamera(camera_id)
        return self._camera_from_row(row)

    def list_cameras(self, limit: int = 500) -> list[CameraSource]:
        rows = self._conn().execute(
            "SELECT * FROM cameras ORDER BY seq LIMIT ?", (limit,)
        ).fetchall()
        return [self._camera_from_row(r) for r in rows]

    def delete_camera(self, camera_id: str) -> None:
        with self._write_lock, self._conn() as conn:
            cur = conn.execute("DELETE FROM cameras WHERE camera_id = ?", (camera_id,))
            if cur.rowcount == 0:
                raise UnknownCamera(camera_id)

    def find_camera_by_sender(self, sender: str) -> CameraSource | None:
        row = self._conn().execute(
            "SELECT * FROM cameras WHERE smtp_sender = ? AND active = 1",
            (sender.strip().lower(),),
        ).fetchone()
        return self._camera_from_row(row) if row else None

    # -- alert rules -----------------------------------------------------

    def put_rule(self, rule: AlertRule) -> AlertRule:
        with self._write_lock, self._conn() as conn:
            conn.execute(
                "INSERT INTO alert_rules(rule_id, name, class_ids, min_confidence, cameras, "
                "cooldown_seconds, sink_kind, sink_target, enabled) "
                "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?) "
                "ON CONFLICT(rule_id) DO UPDATE SET name=excluded.name, "
                "class_ids=excluded.class_ids, min_confidence=excluded.min_confidence, "
                "cameras=excluded.cameras, cooldown_seconds=excluded.cooldown_seconds, "
                "sink_kind=excluded.sink_kind, sink_target=excluded.sink_target, "
                "enabled=excluded.enabled",
                (
                    rule.rule_id,
                    rule.name,
                    json.dumps(sorted(rule.class_ids)),
                    rule.min_confidence,
                    json.dumps(sorted(rule.cameras)) if rule.cameras is not None else None,
                    rule.cooldown_seconds,
                    rule.sink.kind.value,
                    rule.sink.target,
                    1 if rule.enabled else 0,
                ),
            )
        return rule

    @staticmethod
    def _rule_from_row(row: sqlite3.Row) -> AlertRule:
        cameras = row["cameras"]
        return AlertRule(
            rule_id=row["rule_id"],
            name=row["name"],
            class_ids=frozenset(json.loads(row["class_ids"])),
            min_confidence=row["min_confidence"],
            cameras=frozenset(json.loads(cameras)) if cameras is not None else None,
            cooldown_seconds=row["cooldown_seconds"],
            sink=SinkSpec(kind=SinkKind(row["sink_kind"]), target=row["sink_target"]),
            enabled=bool(row["enabled"]),
        )

    def get_rule(self, rule_id: str) -> AlertRule:
        row = self._conn().execute(
            "SELECT * FROM alert_rules WHERE rule_id = ?", (rule_id,)
        ).fetchone()
        if row is None:
            raise UnknownRule(rule_id)
        return self._rule_from_row(row)

    def list_rules(self, enabled_only: bool = False, limit: int = 500) -> list[AlertRule]:
        sql = "SELECT * FROM alert_rules"
        if enabled_only:
            sql += " WHERE enabled = 1"
        rows = self._conn().execute(sql + " ORDER BY seq LIMIT ?", (limit,)).fetchall()
        return [self._rule_from_row(r) for r in rows]

    def delete_rule(self, rule_id: str) -> None:
        with self._write_lock, self._conn() as conn:
            cur = conn.execute("DELETE FROM alert_rules WHERE rule_id = ?", (rule_id,))
            if cur.rowcount == 0:
                raise UnknownRule(rule_id)

    # -- message dedup ---------------------------------------------------
    # Checked before enqueue, marked only after the durable enqueue
    # succeeds: a crash in between replays the message, and asset-level
    # dedup absorbs the replay. Marking first could lose mail.

    def is_message_seen(self, message_id: str) -> bool:
        if not message_id:
            return False
        row = self._conn().execute(
            "SELECT 1 FROM seen_messages WHERE message_id = ?", (message_id,)
        ).fetchone()
        return row is not None

    def mark_message_seen(self, message_id: str) -> None:
        if not message_id:
            return
        with self._write_lock, self._conn() as conn:
            conn.execute(
                "INSERT OR IGNORE INTO seen_messages(message_id, first_seen_us) VALUES (?, ?)",
                (message_id, _us(utcnow())),
            )

    # -- ingest ----------------------------------------------------------

    def find_recent_asset(
        self, source: str, digest: str, at: datetime
    ) -> ImageAsset | None:
        row = self._conn().execute(
            "SELECT * FROM assets WHERE source = ? AND content_hash = ? "
            "AND received_at_us >= ? ORDER BY seq DESC LIMIT 1",
            (source, digest, _us(at - DEDUP_WINDOW)),
        ).fetchone()
        return self._asset_from_row(row) if row else None

    def ingest(
        self,
        image_bytes: bytes,
        detections_factory,
        source: str,
        camera_id: str | None = None,
        received_at: datetime | None = None,
        trigger_time: datetime | None = None,
        declared_filename: str | None = None,
        dimensions: tuple[int, int, int | None] = (0, 0, None),
        rules: list[AlertRule] | None = None,
    ) -> IngestResult:
        """Store one image with its detections and any fired alerts, atomically.

        ``detections_factory(asset)`` runs outside the write transaction
        (it may call a slow backend) but its results commit inside it.
        A (source, content hash) match within the dedup window returns
        the original records and runs no detection at all.
        """
        from ..models import content_hash as hash_of

        received_at = received_at or utcnow()
        digest = hash_of(image_bytes)

        existing = self.find_recent_asset(source, digest, received_at)
        if existing is not None:
            return IngestResult(
                asset=existing,
                detections=tuple(self.detections_for_asset(existing.asset_id)),
                alerts=(),
                duplicate=True,
            )

        width, height, dpi = dimensions
        asset = ImageAsset(
            asset_id=new_id("asset"),
            content_hash=digest,
            width=width,
            height=height,
            dpi=dpi,
            source=source,
            camera_id=camera_id,
            received_at=received_at,
            trigger_time=trigger_time,
            storage_key=self.blobs.storage_key(digest),
            declared_filename=declared_filename,
        )
        detections = tuple(detections_factory(asset))

        # blob lands before the database row; an orphan blob is harmless
        self.blobs.put(image_bytes)

        with self._write_lock:
            conn = self._conn()
            try:
                conn.execute("BEGIN IMMEDIATE")
                # re-check under the write transaction: another writer may
                # have ingested the same bytes while detection ran
                race = conn.execute(
                    "SELECT asset_id FROM assets WHERE source = ? AND content_hash = ? "
                    "AND received_at_us >= ? LIMIT 1",
                    (source, digest, _us(received_at - DEDUP_WINDOW)),
                ).fetchone()
                if race is not None:
                    conn.rollback()
                    original = self.get_asset(race["asset_id"])
                    return IngestResult(
                        asset=original,
                        detections=tuple(self.detections_for_asset(original.asset_id)),
                        alerts=(),
                        duplicate=True,
                    )
                conn.execute(
                    "INSERT INTO assets(asset_id, content_hash, width, height, dpi, source, "
                    "camera_id, received_at_us, trigger_time_us, storage_key, declared_filename, blank) "
                    "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                    (
                        asset.asset_id,
                        asset.content_hash,
                        asset.width,
                        asset.height,
                        asset.dpi,
                        asset.source,
                        asset.camera_id,
                        _us(asset.received_at),
                        _us(asset.trigger_time),
                        asset.storage_key,
                        asset.declared_filename,
                        0 if detections else 1,
                    ),
                )
                for det in detections:
                    conn.execute(
                        "INSERT INTO detections(detection_id, asset_id, class_id, confidence, "
                        "x_min, y_min, x_max, y_max, model_version) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                        (
                            det.detection_id,
                            det.asset_id,
                            det.class_id,
                            det.confidence,
                            det.box.x_min,
                            det.box.y_min,
                            det.box.x_max,
                            det.box.y_max,
                            det.model_version,
                        ),
                    )
                fired: list[AlertEvent] = []
                if rules:
                    for det in detections:
                        recent = self._recent_alerts(conn, det.class_id, camera_id)
                        for event in evaluate(det, camera_id, rules, recent, received_at):
                            conn.execute(
                                "INSERT INTO alerts(alert_id, rule_id, detection_id, camera_id, "
                                "class_id, fired_at_us, delivery_status, attempts) "
                                "VALUES (?, ?, ?, ?, ?, ?, ?, 0)",
                                (
                                    event.alert_id,
                                    event.rule_id,
                                    event.detection_id,
                                    event.camera_id,
                                    event.class_id,
                                    _us(event.fired_at),
                                    event.delivery_status.value,
                                ),
                            )
                            fired.append(event)
                conn.commit()
            except sqlite3.IntegrityError as exc:
                conn.rollback()
                raise IntegrityViolation(str(exc)) from exc
            except BaseException:
                conn.rollback()
                raise
        return IngestResult(asset=asset, detections=detections, alerts=tuple(fired), duplicate=False)

    def _recent_alerts(
        self, conn: sqlite3.Connection, class_id: int, camera_id: str | None
    ) -> list[RecentAlert]:
        rows = conn.execute(
            "SELECT rule_id, camera_id, class_id, fired_at_us FROM alerts "
            "WHERE class_id = ? AND camera_id IS ?",
            (class_id, camera_id),
        ).fetchall()
        return [
            RecentAlert(
                rule_id=r["rule_id"],
                camera_id=r["camera_id"],
                class_id=r["class_id"],
                fired_at=_dt(r["fired_at_us"]),
            )
            for r in rows
        ]

    def put_detections(self, asset_id: str, detections: list[Detection]) -> None:
        """Attach detections to an existing asset (test/backfill path)."""
        with self._write_lock:
            conn = self._conn()
            try:
                conn.execute("BEGIN IMMEDIATE")
                exists = conn.execute(
                    "SELECT 1 FROM assets WHERE asset_id = ?", (asset_id,)
                ).fetchone()
                if not exists:
                    raise IntegrityViolation(f"asset {asset_id} does not exist")
                for det in detections:
                    if det.asset_id != asset_id:
                        raise IntegrityViolation("detection references a different asset")
                    conn.execute(
                        "INSERT INTO detections(detection_id, asset_id, class_id, confidence, "
                        "x_min, y_min, x_max, y_max, model_version) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                        (
                            det.detection_id,
                            det.asset_id,
                            det.class_id,
                            det.confidence,
                            det.box.x_min,
                            det.box.y_min,
                            det.box.x_max,
                            det.box.y_max,
                            det.model_version,
                        ),
                    )
                conn.execute(
                    "UPDATE assets SET blank = ? WHERE asset_id = ?",
                    (0 if detections else 1, asset_id),
                )
                conn.commit()
            except sqlite3.IntegrityError as exc:
                conn.rollback()
                raise IntegrityViolation(str(exc)) from exc
            except BaseException:
                conn.rollback()
                raise

    # -- assets and detections -------------------------------------------

    @staticmethod
    def _asset_from_row(row: sqlite3.Row) -> ImageAsset:
        return ImageAsset(
            asset_id=row["asset_id"],
            content_hash=row["content_hash"],
            width=row["width"],
            height=row["height"],
            dpi=row["dpi"],
            source=row["source"],
            camera_id=row["camera_id"],
            received_at=_dt(row["received_at_us"]),
            trigger_time=_dt(row["trigger_time_us"]),
            storage_key=row["storage_key"],
            declared_filename=row["declared_filename"],
        )

    def get_asset(self, asset_id: str) -> ImageAsset:
        row = self._conn().execute(
            "SELECT * FROM assets WHERE asset_id = ?", (asset_id,)
        ).fetchone()
        if row is None:
            raise UnknownAsset(asset_id)
        return self._asset_from_row(row)

    def asset_count(self) -> int:
        return self._conn().execute("SELECT COUNT(*) AS n FROM assets").fetchone()["n"]

    def get_image_bytes(self, asset_id: str) -> bytes:
        asset = self.get_asset(asset_id)
        return self.blobs.get(asset.content_hash)

    def _verdict_for(self, conn: sqlite3.Connection, detection_id: str) -> HumanVerdict | None:
        row = conn.execute(
            "SELECT * FROM verdicts WHERE detection_id = ? ORDER BY seq DESC LIMIT 1",
            (detection_id,),
        ).fetchone()
        if row is None:
            return None
        return HumanVerdict(
            reviewer=row["reviewer"],
            reviewed_at=_dt(row["reviewed_at_us"]),
            true_class_id=row["true_class_id"],
            sentinel=VerdictSentinel(row["sentinel"]) if row["sentinel"] else None,
        )

    def _detection_from_row(self, conn: sqlite3.Connection, row: sqlite3.Row) -> Detection:
        return Detection(
            detection_id=row["detection_id"],
            asset_id=row["asset_id"],
            box=BoundingBox(row["x_min"], row["y_min"], row["x_max"], row["y_max"]),
            class_id=row["class_id"],
            confidence=row["confidence"],
            model_version=row["model_version"],
            verdict=self._verdict_for(conn, row["detection_id"]),
        )

    def get_detection(self, detection_id: str) -> Detection:
        conn = self._conn()
        row = conn.execute(
            "SELECT * FROM detections WHERE detection_id = ?", (detection_id,)
        ).fetchone()
        if row is None:
            raise UnknownDetection(detection_id)
        return self._detection_from_row(conn, row)

    def detections_for_asset(self, asset_id: str) -> list[Detection]:
        conn = self._conn()
        rows = conn.execute(
            "SELECT * FROM detections WHERE asset_id = ? ORDER BY seq", (asset_id,)
        ).fetchall()
        return [self._detection_from_row(conn, r) for r in rows]

    def query_detections(
        self,
        camera_id: str | None = None,
        class_id: int | None = None,
        received_from: datetime | None = None,
        received_to: datetime | None = None,
        min_confidence: float | None = None,
        verified: bool | None = None,
        cursor: str | None = None,
        limit: int = 100,
    ) -> DetectionPage:
        """Filtered page of detections, newest asset first, then newest row.

        Filters are conjunctive. The cursor is opaque; pass it back to get
        the next page.
        """
        conn = self._conn()
        clauses = ["1=1"]
        params: list = []
        if camera_id is not None:
            clauses.append("a.camera_id = ?")
            params.append(camera_id)
        if class_id is not None:
            clauses.append("d.class_id = ?")
            params.append(class_id)
        if received_from is not None:
            clauses.append("a.received_at_us >= ?")
            params.append(_us(received_from))
        if received_to is not None:
            clauses.append("a.received_at_us <= ?")
            params.append(_us(received_to))
        if min_confidence is not None:
            clauses.append("d.confidence >= ?")
            params.append(min_confidence)
        if verified is not None:
            sub = "EXISTS (SELECT 1 FROM verdicts v WHERE v.detection_id = d.detection_id)"
            clauses.append(sub if verified else f"NOT {sub}")
        if cursor is not None:
            try:
                at_us, seq = json.loads(base64.urlsafe_b64decode(cursor.encode()).decode())
                at_us, seq = int(at_us), int(seq)
            except (ValueError, json.JSONDecodeError) as exc:
                raise BadCursor(str(exc)) from exc
            clauses.append("(a.received_at_us < ? OR (a.received_at_us = ? AND d.seq < ?))")
            params.extend([at_us, at_us, seq])

        limit = max(1, min(int(limit), 500))
        sql = (
            "SELECT d.*, a.received_at_us AS a_received FROM detections d "
            "JOIN assets a ON a.asset_id = d.asset_id "
            f"WHERE {' AND '.join(clauses)} "
            "ORDER BY a.received_at_us DESC, d.seq DESC LIMIT ?"
        )
        rows = conn.execute(sql, params + [limit + 1]).fetchall()
        page = rows[:limit]
        next_cursor = None
        if len(rows) > limit and page:
            last = page[-1]
            token = json.dumps([last["a_received"], last["seq"]]).encode()
            next_cursor = base64.urlsafe_b64encode(token).decode()
        return DetectionPage(
            items=tuple(self._detection_from_row(conn, r) for r in page),
            next_cursor=next_cursor,
        )

    def detections_in_range(
        self,
        received_from: datetime | None = None,
        received_to: datetime | None = None,
    ) -> list[Detection]:
        """Every detection whose asset arrived in the range, verdicts attached."""
        conn = self._conn()
        clauses = ["1=1"]
        params: list = []
        if received_from is not None:
            clauses.append("a.received_at_us >= ?")
            params.append(_us(received_from))
        if received_to is not None:
            clauses.append("a.received_at_us <= ?")
            params.append(_us(received_to))
        rows = conn.execute(
            "SELECT d.* FROM detections d JOIN assets a ON a.asset_id = d.asset_id "
            f"WHERE {' AND '.join(clauses)} ORDER BY d.seq",
            params,
        ).fetchall()
        return [self._detection_from_row(conn, r) for r in rows]

    # -- verdicts ----------------------------------------------------------

    def record_verdict(self, detection_id: str, verdict: HumanVerdict) -> Detection:
        """Store a verdict; history is append-only, reads use the latest."""
        with self._write_lock, self._conn() as conn:
            exists = conn.execute(
                "SELECT 1 FROM detections WHERE detection_id = ?", (detection_id,)
            ).fetchone()
            if not exists:
                raise UnknownDetection(detection_id)
            conn.execute(
                "INSERT INTO verdicts(detection_id, true_class_id, sentinel, reviewer, reviewed_at_us) "
                "VALUES (?, ?, ?, ?, ?)",
                (
                    detection_id,
                    verdict.true_class_id,
                    verdict.sentinel.value if verdict.sentinel else None,
                    verdict.reviewer,
                    _us(verdict.reviewed_at),
                ),
            )
        return self.get_detection(detection_id)

    def verdict_history(self, detection_id: str) -> list[HumanVerdict]:
        rows = self._conn().execute(
            "SELECT * FROM verdicts WHERE detection_id = ? ORDER BY seq", (detection_id,)
        ).fetchall()
        return [
            HumanVerdict(
                reviewer=r["reviewer"],
                reviewed_at=_dt(r["reviewed_at_us"]),
                true_class_id=r["true_class_id"],
                sentinel=VerdictSentinel(r["sentinel"]) if r["sentinel"] else None,
            )
            for r in rows
        ]

    # -- blanks ------------------------------------------------------------

    def blank_stats(
        self,
        received_from: datetime | None = None,
        received_to: datetime | None = None,
    ) -> BlankStats:
        clauses = ["1=1"]
        params: list = []
        if received_from is not None:
            clauses.append("received_at_us >= ?")
            params.append(_us(received_from))
        if received_to is not None:
            clauses.append("received_at_us <= ?")
            params.append(_us(received_to))
        row = self._conn().execute(
            f"SELECT COUNT(*) AS total, COALESCE(SUM(blank), 0) AS blank FROM assets "
            f"WHERE {' AND '.join(clauses)}",
            params,
        ).fetchone()
        return BlankStats(total_assets=row["total"], blank_assets=row["blank"])

    # -- alerts -------------------------------------------------------------

    @staticmethod
    def _alert_from_row(row: sqlite3.Row) -> AlertEvent:
        return AlertEvent(
            alert_id=row["alert_id"],
            rule_id=row["rule_id"],
            detection_id=row["detection_id"],
            camera_id=row["camera_id"],
            class_id=row["class_id"],
            fired_at=_dt(row["fired_at_us"]),
            delivery_status=DeliveryStatus(row["delivery_status"]),
            attempts=row["attempts"],
        )

    def list_alerts(self, status: DeliveryStatus | None = None, limit: int = 500) -> list[AlertEvent]:
        sql = "SELECT * FROM alerts"
        params: list = []
        if status is not None:
            sql += " WHERE delivery_status = ?"
            params.append(status.value)
        sql += " ORDER BY seq DESC LIMIT ?"
        params.append(limit)
        return [self._alert_from_row(r) for r in self._conn().execute(sql, params).fetchall()]

    def claim_pending_alerts(self, limit: int = 32) -> list[AlertEvent]:
        return [
            self._alert_from_row(r)
            for r in self._conn().execute(
                "SELECT * FROM alerts WHERE delivery_status = 'pending' ORDER BY seq LIMIT ?",
                (limit,),
            ).fetchall()
        ]

    def mark_delivery(
        self, alert_id: str, status: DeliveryStatus, attempts: int, detail: str = ""
    ) -> None:
        with self._write_lock, self._conn() as conn:
            conn.execute(
                "UPDATE alerts SET delivery_status = ?, attempts = ?, detail = ? WHERE alert_id = ?",
                (status.value, attempts, detail, alert_id),
            )

    # -- quarantine ----------------------------------------------------------

    def add_quarantine(
        self,
        reason: str,
        sender: str | None = None,
        message_id: str | None = None,
        eml_path: str | None = None,
    ) -> str:
        entry_id = new_id("quar")
        with self._write_lock, self._conn() as conn:
            conn.execute(
                "INSERT INTO quarantine(entry_id, reason, sender, message_id, received_at_us, eml_path) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                (entry_id, reason, sender, message_id, _us(utcnow()), eml_path),
            )
        return entry_id

    def list_quarantine(self, limit: int = 500) -> list[dict]:
        rows = self._conn().execute(
            "SELECT * FROM quarantine ORDER BY seq LIMIT ?", (limit,)
        ).fetchall()
        return [
            {
                "entry_id": r["entry_id"],
                "reason": r["reason"],
                "sender": r["sender"],
                "message_id": r["message_id"],
                "received_at": _dt(r["received_at_us"]),
                "eml_path": r["eml_path"],
            }
            for r in rows
        ]

    # -- backup ----------------------------------------------------------------

    def export_dump(self, path: str | Path) -> int:
        """Line-delimited JSON dump of every table; returns the row count."""
        conn = self._conn()
        tables = (
            "assets", "detections", "verdicts", "cameras",
            "alert_rules", "alerts", "quarantine", "seen_messages",
        )
        count = 0
        with open(path, "w", encoding="utf-8") as fh:
            for table in tables:
                for row in conn.execute(f"SELECT * FROM {table} ORDER BY rowid"):
                    fh.write(json.dumps({"table": table, "row": dict(row)}) + "\n")
                    count += 1
        return count

    def import_dump(self, path: str | Path) -> int:
        """Load a dump produced by export_dump into an empty store."""
        count = 0
        with self._write_lock, self._conn() as conn:
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    record = json.loads(line)
                    row = record["row"]
                    columns = ", ".join(row)
                    placeholders = ", ".join("?" for _ in row)
                    conn.execute(
                        f"INSERT OR REPLACE INTO {record['table']}({columns}) VALUES ({placeholders})",
                        list(row.values()),
                    )
                    count += 1
        return count


BATCH_SOURCE = BATCH_UPLOAD
