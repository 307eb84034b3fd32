import io
from datetime import datetime, timezone
from email.message import EmailMessage

import pytest
from PIL import Image

from camtrap.errors import NoAttachment, OversizeAttachment, UnknownSender
from camtrap.ingest.mail import accept_message
from camtrap.models import CameraSource

from conftest import make_jpeg, make_png


class FakeRegistry:
    def __init__(self, cameras: list[CameraSource]):
        self.cameras = {c.camera_id: c for c in cameras}

    def find_camera_by_sender(self, sender: str):
        for cam in self.cameras.values():
            if cam.active and cam.smtp_sender.lower() == sender.strip().lower():
                return cam
        return None

    def get_camera(self, camera_id: str):
        return self.cameras[camera_id]


@pytest.fixture()
def registry():
    return FakeRegistry(
        [
            CameraSource("camA", "North", "cama@cams.example"),
            CameraSource("camB", "South", "camb@cams.example", active=False),
        ]
    )


def camera_mail(
    sender="cama@cams.example",
    attachments=(("shot1.jpg", "image/jpeg", None),),
    subject="motion event",
    message_id="<m1@cam>",
    date="Mon, 20 May 2024 10:30:00 +0000",
) -> bytes:
    msg = EmailMessage()
    msg["From"] = sender
    msg["To"] = "uploads@platform.example"
    msg["Subject"] = subject
    msg["Message-ID"] = message_id
    if date:
        msg["Date"] = date
    msg.set_content("camera upload")
    for filename, ctype, data in attachments:
        payload = data if data is not None else make_jpeg(seed=hash(filename) % 100)
        maintype, subtype = ctype.split("/")
        msg.add_attachment(payload, maintype=maintype, subtype=subtype, filename=filename)
    return bytes(msg)


def test_happy_path_single_jpeg(registry):
    events = accept_message(camera_mail(), registry, envelope_sender="cama@cams.example")
    assert len(events) == 1
    assert events[0].camera_id == "camA"
    assert events[0].declared_filename == "shot1.jpg"
    assert events[0].message_id == "<m1@cam>"


def test_multiple_attachments_yield_multiple_events(registry):
    raw = camera_mail(
        attachments=(
            ("a.jpg", "image/jpeg", None),
            ("b.png", "image/png", make_png()),
            ("notes.txt", "text/plain", b"ignore me"),
        )
    )
    events = accept_message(raw, registry, envelope_sender="cama@cams.example")
    assert [e.declared_filename for e in events] == ["a.jpg", "b.png"]


def test_unknown_sender_rejected(registry):
    with pytest.raises(UnknownSender):
        accept_message(camera_mail(sender="who@nowhere"), registry, envelope_sender="who@nowhere")


def test_inactive_camera_is_unknown(registry):
    with pytest.raises(UnknownSender):
        accept_message(
            camera_mail(sender="camb@cams.example"), registry, envelope_sender="camb@cams.example"
        )


def test_subject_token_fallback(registry):
    raw = camera_mail(sender="modem@provider.example", subject="upload camera:camA batch")
    events = accept_message(raw, registry, envelope_sender="modem@provider.example")
    assert events[0].camera_id == "camA"


def test_envelope_sender_beats_header(registry):
    raw = camera_mail(sender="forged@nowhere")
    events = accept_message(raw, registry, envelope_sender="cama@cams.example")
    assert events[0].camera_id == "camA"


def test_no_attachment(registry):
    msg = EmailMessage()
    msg["From"] = "cama@cams.example"
    msg["Message-ID"] = "<m2@cam>"
    msg.set_content("just text")
    with pytest.raises(NoAttachment):
        accept_message(bytes(msg), registry, envelope_sender="cama@cams.example")


def test_oversize_attachment(registry):
    big = make_jpeg() + b"\x00" * (1024 * 1024)
    raw = camera_mail(attachments=(("big.jpg", "image/jpeg", big),))
    with pytest.raises(OversizeAttachment):
        accept_message(raw, registry, envelope_sender="cama@cams.example", max_attachment_mb=0.5)


def test_trigger_time_from_date_header(registry):
    events = accept_message(camera_mail(), registry, envelope_sender="cama@cams.example")
    assert events[0].trigger_time == datetime(2024, 5, 20, 10, 30, tzinfo=timezone.utc)


def test_trigger_time_falls_back_to_receipt(registry):
    received = datetime(2024, 6, 1, 8, 0, tzinfo=timezone.utc)
    raw = camera_mail(date=None)
    events = accept_message(
        raw, registry, envelope_sender="cama@cams.example", received_at=received
    )
    assert events[0].trigger_time == received


def exif_jpeg(capture: str) -> bytes:
    img = Image.new("RGB", (32, 32), (5, 5, 5))
    exif = Image.Exif()
    exif[306] = capture  # DateTime in the base IFD
    buf = io.BytesIO()
    img.save(buf, format="JPEG", exif=exif)
    return buf.getvalue()


def test_trigger_time_prefers_exif_over_date_header(registry):
    data = exif_jpeg("2024:05:20 06:15:00")
    raw = camera_mail(attachments=(("e.jpg", "image/jpeg", data),))
    events = accept_message(raw, registry, envelope_sender="cama@cams.example")
    assert events[0].trigger_time == datetime(2024, 5, 20, 6, 15, tzinfo=timezone.utc)
