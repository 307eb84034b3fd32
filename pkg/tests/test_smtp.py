import smtplib
import ssl
from datetime import datetime, timedelta, timezone
from email.message import EmailMessage

import pytest

from camtrap.ingest.smtp import SmtpEnvelope, SmtpServer

from conftest import make_jpeg


def build_message(sender="cam@cams.example", attach=True) -> EmailMessage:
    msg = EmailMessage()
    msg["From"] = sender
    msg["To"] = "uploads@platform.example"
    msg["Subject"] = "motion"
    msg["Message-ID"] = "<m1@cam>"
    msg.set_content("body line\n.leading dot line\n")
    if attach:
        msg.add_attachment(
            make_jpeg(), maintype="image", subtype="jpeg", filename="shot.jpg"
        )
    return msg


@pytest.fixture()
def server():
    received: list[SmtpEnvelope] = []

    def handler(envelope: SmtpEnvelope):
        received.append(envelope)
        return 250, "queued"

    smtp = SmtpServer(handler, host="127.0.0.1", port=0)
    smtp.start()
    yield smtp, received
    smtp.stop()


def test_full_session_delivers_envelope(server):
    smtp, received = server
    msg = build_message()
    with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
        client.send_message(msg)
    assert len(received) == 1
    envelope = received[0]
    assert envelope.mail_from == "cam@cams.example"
    assert envelope.rcpt_tos == ["uploads@platform.example"]
    # dot-unstuffing preserved the leading-dot body line
    assert b".leading dot line" in envelope.data
    assert b"shot.jpg" in envelope.data


def test_ehlo_advertises_size(server):
    smtp, _ = server
    with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
        code, response = client.ehlo()
        assert code == 250
        assert b"SIZE" in response
        assert b"STARTTLS" not in response  # no TLS context configured


def test_handler_code_is_returned_to_client():
    def handler(envelope):
        return 451, "queue full; try again later"

    smtp = SmtpServer(handler, host="127.0.0.1", port=0)
    smtp.start()
    try:
        with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
            with pytest.raises(smtplib.SMTPDataError) as err:
                client.send_message(build_message())
            assert err.value.smtp_code == 451
    finally:
        smtp.stop()


def test_oversize_message_rejected_with_552():
    def handler(envelope):
        return 250, "ok"

    smtp = SmtpServer(handler, host="127.0.0.1", port=0, max_message_bytes=1000)
    smtp.start()
    try:
        msg = build_message()
        with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
            with pytest.raises((smtplib.SMTPDataError, smtplib.SMTPSenderRefused)) as err:
                client.send_message(msg)
            code = getattr(err.value, "smtp_code", None)
            assert code == 552
    finally:
        smtp.stop()


def test_mail_before_helo_rejected(server):
    smtp, _ = server
    with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
        code, _ = client.docmd("MAIL", "FROM:<x@y>")
        assert code == 503


def test_rcpt_before_mail_rejected(server):
    smtp, _ = server
    with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
        client.ehlo()
        code, _ = client.docmd("RCPT", "TO:<x@y>")
        assert code == 503


def test_rset_and_noop(server):
    smtp, received = server
    with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
        client.ehlo()
        assert client.noop()[0] == 250
        client.mail("cam@cams.example")
        assert client.rset()[0] == 250
        # after RSET the transaction is gone
        code, _ = client.docmd("RCPT", "TO:<uploads@platform.example>")
        assert code == 503
    assert received == []


def test_concurrent_sessions(server):
    import threading

    smtp, received = server

    def send_one(i: int):
        msg = build_message()
        del msg["Message-ID"]
        msg["Message-ID"] = f"<concurrent{i}@cam>"
        with smtplib.SMTP("127.0.0.1", smtp.port, timeout=10) as client:
            client.send_message(msg)

    threads = [threading.Thread(target=send_one, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join(timeout=15)
    assert len(received) == 8
    ids = {e.data.split(b"Message-ID: ")[1].split(b"\n")[0] for e in received}
    assert len(ids) == 8


def _self_signed_context(tmp_path):
    from datetime import datetime as dt

    from cryptography import x509
    from cryptography.hazmat.primitives import hashes, serialization
    from cryptography.hazmat.primitives.asymmetric import rsa
    from cryptography.x509.oid import NameOID

    key = rsa.generate_private_key(public_exponent=65537, key_size=2048)
    name = x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, "localhost")])
    cert = (
        x509.CertificateBuilder()
        .subject_name(name)
        .issuer_name(name)
        .public_key(key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(dt.now(timezone.utc) - timedelta(days=1))
        .not_valid_after(dt.now(timezone.utc) + timedelta(days=1))
        .sign(key, hashes.SHA256())
    )
    cert_path = tmp_path / "cert.pem"
    key_path = tmp_path / "key.pem"
    cert_path.write_bytes(cert.public_bytes(serialization.Encoding.PEM))
    key_path.write_bytes(
        key.private_bytes(
            serialization.Encoding.PEM,
            serialization.PrivateFormat.TraditionalOpenSSL,
            serialization.NoEncryption(),
        )
    )
    context = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
    context.load_cert_chain(cert_path, key_path)
    return context


def test_starttls_upgrade_and_delivery(tmp_path):
    received = []

    def handler(envelope):
        received.append(envelope)
        return 250, "queued"

    smtp = SmtpServer(
        handler, host="127.0.0.1", port=0, tls_context=_self_signed_context(tmp_path)
    )
    smtp.start()
    try:
        client_ctx = ssl.SSLContext(ssl.PROTOCOL_TLS_CLIENT)
        client_ctx.check_hostname = False
        client_ctx.verify_mode = ssl.CERT_NONE
        with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
            code, response = client.ehlo()
            assert b"STARTTLS" in response
            client.starttls(context=client_ctx)
            client.send_message(build_message())
        assert len(received) == 1
    finally:
        smtp.stop()


def test_auth_plain_required_when_configured():
    received = []

    def handler(envelope):
        received.append(envelope)
        return 250, "queued"

    smtp = SmtpServer(
        handler, host="127.0.0.1", port=0, credentials=("camuser", "campass")
    )
    smtp.start()
    try:
        with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
            client.ehlo()
            code, _ = client.docmd("MAIL", "FROM:<cam@cams.example>")
            assert code == 530  # not authenticated yet
        with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
            client.login("camuser", "campass")
            client.send_message(build_message())
        assert len(received) == 1
        with smtplib.SMTP("127.0.0.1", smtp.port, timeout=5) as client:
            with pytest.raises(smtplib.SMTPAuthenticationError):
                client.login("camuser", "wrong")
    finally:
        smtp.stop()
