"""Shared fixtures: temp stores, synthetic images, acceptance reporting."""

from __future__ import annotations

import io

import pytest
from PIL import Image

from camtrap.catalog import default_catalog
from camtrap.store.database import EventStore

_ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture()
def catalog():
    return default_catalog()


@pytest.fixture()
def store(tmp_path):
    s = EventStore(tmp_path / "store")
    yield s
    s.close()


def make_jpeg(
    width: int = 64, height: int = 48, color: tuple[int, int, int] = (10, 120, 40), seed: int = 0
) -> bytes:
    """Small deterministic JPEG; vary color/seed for distinct content hashes."""
    img = Image.new("RGB", (width, height), color)
    # one marker pixel keyed by seed keeps equal-color images distinct
    img.putpixel((seed % width, (seed * 7) % height), (255 - color[0], seed % 256, 17))
    buf = io.BytesIO()
    img.save(buf, format="JPEG", quality=90)
    return buf.getvalue()


def make_png(width: int = 32, height: int = 32, color=(200, 10, 10)) -> bytes:
    img = Image.new("RGB", (width, height), color)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


@pytest.fixture()
def jpeg_bytes():
    return make_jpeg()


def record_acceptance(name: str, passed: bool) -> None:
    _ACCEPTANCE_RESULTS[name] = "PASS" if passed else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        label = marker.args[0] if marker.args else item.name
        _ACCEPTANCE_RESULTS[label] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{label}: {_ACCEPTANCE_RESULTS[label]}")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion test")
