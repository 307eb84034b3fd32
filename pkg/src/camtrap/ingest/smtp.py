"""Minimal non-relaying SMTP listener for camera uploads.

Speaks HELO/EHLO, MAIL, RCPT, DATA, RSET, NOOP, QUIT, plus STARTTLS when
a TLS context is configured and AUTH PLAIN when credentials are. Every
accepted message is handed to a callback that must durably enqueue it
before this server sends the 250, so a crash after the acknowledgment
can never lose mail. Nothing is ever forwarded anywhere.
"""

from __future__ import annotations

import base64
import logging
import re
import socket
import socketserver
import ssl
import threading
from dataclasses import dataclass, field
from typing import Callable

log = logging.getLogger("camtrap.smtp")

MAX_LINE = 8192
_ADDR = re.compile(r"<([^>]*)>")


@dataclass
class SmtpEnvelope:
    peer: str
    mail_from: str = ""
    rcpt_tos: list[str] = field(default_factory=list)
    data: bytes = b""


# handler returns (code, text); e.g. (250, "queued as evt_...")
EnvelopeHandler = Callable[[SmtpEnvelope], tuple[int, str]]


def _extract_address(arg: str) -> str:
    match = _ADDR.search(arg)
    if match:
        return match.group(1).strip()
    return arg.split(":", 1)[-1].split()[0].strip() if ":" in arg else arg.strip()


class _Session(socketserver.BaseRequestHandler):
    # self.server is the _Server below, carrying the listener settings

    def setup(self):
        self.request.settimeout(60)
        self.rfile = self.request.makefile("rb")
        self.envelope = SmtpEnvelope(peer=f"{self.client_address[0]}:{self.client_address[1]}")
        self.greeted = False
        self.authenticated = self.server.credentials is None
        self.tls_active = False

    def _reply(self, code: int, text: str) -> None:
        self.request.sendall(f"{code} {text}\r\n".encode("utf-8"))

    def _reply_lines(self, code: int, lines: list[str]) -> None:
        out = "".join(
            f"{code}-{line}\r\n" if i < len(lines) - 1 else f"{code} {line}\r\n"
            for i, line in enumerate(lines)
        )
        self.request.sendall(out.encode("utf-8"))

    def _readline(self) -> bytes | None:
        line = self.rfile.readline(MAX_LINE + 2)
        if not line:
            return None
        return line.rstrip(b"\r\n")

    def handle(self):
        try:
            self._reply(220, f"{self.server.hostname} camtrap SMTP service ready")
            while True:
                line = self._readline()
                if line is None:
                    return
                try:
                    text = line.decode("utf-8", errors="replace")
                except Exception:
                    self._reply(500, "unrecognized command")
                    continue
                if not self._dispatch(text):
                    return
        except (socket.timeout, ConnectionError, ssl.SSLError, OSError):
            return
        finally:
            try:
                self.rfile.close()
            except OSError:
                pass

    def _dispatch(self, line: str) -> bool:
        verb, _, arg = line.partition(" ")
        verb = verb.upper()
        if verb in ("HELO", "EHLO"):
            self.greeted = True
            if verb == "HELO":
                self._reply(250, self.server.hostname)
            else:
                extensions = [self.server.hostname, f"SIZE {self.server.max_message_bytes}", "8BITMIME"]
                if self.server.tls_context is not None and not self.tls_active:
                    extensions.append("STARTTLS")
                if self.server.credentials is not None:
                    extensions.append("AUTH PLAIN")
                self._reply_lines(250, extensions)
            return True
        if verb == "STARTTLS":
            return self._starttls()
        if verb == "AUTH":
            return self._auth(arg)
        if verb == "NOOP":
            self._reply(250, "ok")
            return True
        if verb == "RSET":
            self.envelope = SmtpEnvelope(peer=self.envelope.peer)
            self._reply(250, "ok")
            return True
        if verb == "QUIT":
            self._reply(221, "bye")
            return False
        if verb == "MAIL":
            return self._mail(arg)
        if verb == "RCPT":
            return self._rcpt(arg)
        if verb == "DATA":
            return self._data()
        if verb in ("VRFY", "EXPN", "HELP"):
            self._reply(502, "command not implemented")
            return True
        self._reply(500, f"unrecognized command {verb!r}")
        return True

    def _starttls(self) -> bool:
        if self.server.tls_context is None:
            self._reply(502, "STARTTLS not offered")
            return True
        if self.tls_active:
            self._reply(503, "TLS already active")
            return True
        self._reply(220, "ready to start TLS")
        try:
            self.rfile.close()
            self.request = self.server.tls_context.wrap_socket(self.request, server_side=True)
            self.request.settimeout(60)
            self.rfile = self.request.makefile("rb")
        except ssl.SSLError as exc:
            log.warning("TLS handshake failed from %s: %s", self.envelope.peer, exc)
            return False
        self.tls_active = True
        self.greeted = False
        self.envelope = SmtpEnvelope(peer=self.envelope.peer)
        return True

    def _auth(self, arg: str) -> bool:
        if self.server.credentials is None:
            self._reply(503, "authentication not configured")
            return True
        parts = arg.split()
        if not parts or parts[0].upper() != "PLAIN":
            self._reply(504, "only AUTH PLAIN is supported")
            return True
        if len(parts) > 1:
            blob = parts[1]
        else:
            self._reply(334, "")
            line = self._readline()
            if line is None:
                return False
            blob = line.decode("ascii", errors="replace")
        try:
            _, user, password = base64.b64decode(blob).decode("utf-8").split("\0")
        except (ValueError, UnicodeDecodeError):
            self._reply(501, "malformed AUTH PLAIN payload")
            return True
        if (user, password) == self.server.credentials:
            self.authenticated = True
            self._reply(235, "authentication successful")
        else:
            self._reply(535, "authentication failed")
        return True

    def _mail(self, arg: str) -> bool:
        if not self.greeted:
            self._reply(503, "send HELO/EHLO first")
            return True
        if not self.authenticated:
            self._reply(530, "authentication required")
            return True
        if self.envelope.mail_from:
            self._reply(503, "nested MAIL command")
            return True
        size = re.search(r"SIZE=(\d+)", arg, re.IGNORECASE)
        if size and int(size.group(1)) > self.server.max_message_bytes:
            self._reply(552, "message exceeds fixed maximum message size")
            return True
        self.envelope.mail_from = _extract_address(arg)
        self._reply(250, "ok")
        return True

    def _rcpt(self, arg: str) -> bool:
        if not self.envelope.mail_from:
            self._reply(503, "need MAIL before RCPT")
            return True
        self.envelope.rcpt_tos.append(_extract_address(arg))
        self._reply(250, "ok")
        return True

    def _data(self) -> bool:
        if not self.envelope.rcpt_tos:
            self._reply(503, "need RCPT before DATA")
            return True
        self._reply(354, "end data with <CRLF>.<CRLF>")
        chunks: list[bytes] = []
        total = 0
        overflow = False
        while True:
            line = self.rfile.readline(MAX_LINE + 2)
            if not line:
                return False
            if line.rstrip(b"\r\n") == b".":
                break
            if line.startswith(b".."):
                line = line[1:]  # dot-unstuffing
            total += len(line)
            if total > self.server.max_message_bytes:
                overflow = True
                continue  # keep draining to the terminator
            chunks.append(line)
        if overflow:
            self._reply(552, "message exceeds fixed maximum message size")
            self.envelope = SmtpEnvelope(peer=self.envelope.peer)
            return True
        self.envelope.data = b"".join(chunks)
        try:
            code, text = self.server.handler(self.envelope)
        except Exception:
            log.exception("message handler failed")
            code, text = 451, "local error in processing"
        self._reply(code, text)
        self.envelope = SmtpEnvelope(peer=self.envelope.peer)
        return True


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class SmtpServer:
    """Threaded SMTP listener; one session per connection."""

    def __init__(
        self,
        handler: EnvelopeHandler,
        host: str = "127.0.0.1",
        port: int = 2525,
        hostname: str = "camtrap",
        max_message_bytes: int = 32 * 1024 * 1024,
        tls_context: ssl.SSLContext | None = None,
        credentials: tuple[str, str] | None = None,
    ):
        self.handler = handler
        self.hostname = hostname
        self.max_message_bytes = max_message_bytes
        self.tls_context = tls_context
        self.credentials = credentials
        self._tcp = _Server((host, port), _Session)
        self._tcp.hostname = hostname  # type: ignore[attr-defined]
        self._tcp.handler = handler  # type: ignore[attr-defined]
        self._tcp.max_message_bytes = max_message_bytes  # type: ignore[attr-defined]
        self._tcp.tls_context = tls_context  # type: ignore[attr-defined]
        self._tcp.credentials = credentials  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._tcp.server_address[1]

    def start(self) -> None:
        self._thread = threading.Thread(
            target=self._tcp.serve_forever, name="smtp-listener", daemon=True
        )
        self._thread.start()
        log.info("SMTP listening on %s:%s", *self._tcp.server_address)

    def stop(self) -> None:
        if self._thread is not None:
            self._tcp.shutdown()  # blocks until the serve loop acknowledges
        self._tcp.server_close()
        if self._thread:
            self._thread.join(timeout=5)
            self._thread = None
