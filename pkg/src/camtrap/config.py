"""Deployment configuration: ``key=value`` file with environment overrides.

Environment variables win over the file; both use the same key names.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

KEYS = (
    "API_BIND",
    "SMTP_BIND",
    "SMTP_TLS_CERT",
    "SMTP_TLS_KEY",
    "SMTP_AUTH_USER",
    "SMTP_AUTH_PASSWORD",
    "EMAIL_RELAY",
    "AUTH_TOKEN",
    "ALLOW_ANON_READ",
    "DETECTOR",
    "DETECTOR_ENDPOINT",
    "CONFIDENCE_THRESHOLD",
    "MODEL_NAME",
    "MODEL_VERSION",
    "MAX_ATTACHMENT_MB",
    "QUEUE_DIR",
    "QUEUE_CAPACITY",
    "DATA_DIR",
    "MOCK_FIXTURE",
    "CATALOG_FILE",
    "INGEST_WORKERS",
)


def _split_bind(value: str, default_host: str, default_port: int) -> tuple[str, int]:
    value = value.strip()
    if not value:
        return default_host, default_port
    if ":" in value:
        host, _, port = value.rpartition(":")
        return host or default_host, int(port)
    return default_host, int(value)


@dataclass
class AppConfig:
    api_bind: str = "127.0.0.1:8080"
    smtp_bind: str = "127.0.0.1:2525"
    smtp_tls_cert: str = ""
    smtp_tls_key: str = ""
    smtp_auth_user: str = ""
    smtp_auth_password: str = ""
    email_relay: str = "localhost:25"  # outbound relay for email alert sinks
    auth_token: str = ""
    allow_anon_read: bool = True
    detector: str = "mock"  # mock | remote
    detector_endpoint: str = ""
    confidence_threshold: float = 0.387
    model_name: str = "camtrap-detector"
    model_version: str = "1"
    max_attachment_mb: float = 25.0
    queue_dir: str = ""
    queue_capacity: int = 10_000
    data_dir: str = "./camtrap-data"
    mock_fixture: str = ""
    catalog_file: str = ""
    ingest_workers: int = 2

    raw: dict[str, str] = field(default_factory=dict, repr=False)

    @property
    def api_host_port(self) -> tuple[str, int]:
        return _split_bind(self.api_bind, "127.0.0.1", 8080)

    @property
    def smtp_host_port(self) -> tuple[str, int]:
        return _split_bind(self.smtp_bind, "127.0.0.1", 2525)

    @property
    def email_relay_host_port(self) -> tuple[str, int]:
        return _split_bind(self.email_relay, "localhost", 25)

    @property
    def queue_path(self) -> Path:
        return Path(self.queue_dir) if self.queue_dir else Path(self.data_dir) / "queue"

    def __post_init__(self):
        if self.detector not in ("mock", "remote"):
            raise ValueError(f"DETECTOR must be mock or remote, got {self.detector!r}")
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError("CONFIDENCE_THRESHOLD outside [0, 1]")
        if self.detector == "remote" and not self.detector_endpoint:
            raise ValueError("remote detector needs DETECTOR_ENDPOINT")
        if bool(self.smtp_tls_cert) != bool(self.smtp_tls_key):
            raise ValueError("SMTP TLS needs both SMTP_TLS_CERT and SMTP_TLS_KEY")
        if bool(self.smtp_auth_user) != bool(self.smtp_auth_password):
            raise ValueError("SMTP auth needs both SMTP_AUTH_USER and SMTP_AUTH_PASSWORD")


def _parse_file(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        values[key.strip().upper()] = value.strip()
    return values


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> AppConfig:
    env = os.environ if env is None else env
    values: dict[str, str] = {}
    if path is not None:
        values.update(_parse_file(path))
    for key in KEYS:
        if key in env:
            values[key] = env[key]

    def get(key: str, default: str) -> str:
        return values.get(key, default)

    def get_bool(key: str, default: bool) -> bool:
        raw = values.get(key)
        if raw is None:
            return default
        return raw.strip().lower() in ("1", "true", "yes", "on")

    return AppConfig(
        api_bind=get("API_BIND", "127.0.0.1:8080"),
        smtp_bind=get("SMTP_BIND", "127.0.0.1:2525"),
        smtp_tls_cert=get("SMTP_TLS_CERT", ""),
        smtp_tls_key=get("SMTP_TLS_KEY", ""),
        smtp_auth_user=get("SMTP_AUTH_USER", ""),
        smtp_auth_password=get("SMTP_AUTH_PASSWORD", ""),
        email_relay=get("EMAIL_RELAY", "localhost:25"),
        auth_token=get("AUTH_TOKEN", ""),
        allow_anon_read=get_bool("ALLOW_ANON_READ", True),
        detector=get("DETECTOR", "mock"),
        detector_endpoint=get("DETECTOR_ENDPOINT", ""),
        confidence_threshold=float(get("CONFIDENCE_THRESHOLD", "0.387")),
        model_name=get("MODEL_NAME", "camtrap-detector"),
        model_version=get("MODEL_VERSION", "1"),
        max_attachment_mb=float(get("MAX_ATTACHMENT_MB", "25")),
        queue_dir=get("QUEUE_DIR", ""),
        queue_capacity=int(get("QUEUE_CAPACITY", "10000")),
        data_dir=get("DATA_DIR", "./camtrap-data"),
        mock_fixture=get("MOCK_FIXTURE", ""),
        catalog_file=get("CATALOG_FILE", ""),
        ingest_workers=int(get("INGEST_WORKERS", "2")),
        raw=values,
    )


def config_field_names() -> list[str]:
    return [f.name for f in fields(AppConfig) if f.name != "raw"]
