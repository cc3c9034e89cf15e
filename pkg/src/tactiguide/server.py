"""Socket front end for the gateway protocol.

One listener speaks three dialects, told apart by the first request line:

  * raw line-delimited JSON (the native protocol, one session per connection),
  * HTTP GET for the static UI bundle and the bundled glyph asset,
  * WebSocket upgrade at /ws, carrying the same line protocol with one JSON
    message per text frame.

Sessions are confined to their connection's thread; the handler loop
serializes all messages of a session.
"""

from __future__ import annotations

import base64
import hashlib
import os
import posixpath
import re
import socketserver
import struct
from importlib import resources

from .gateway import GatewayConfig, Session

_HTTP_REQUEST_RE = re.compile(rb"^(GET|HEAD|POST|PUT|DELETE|OPTIONS) (\S+) HTTP/1\.[01]$")
_WS_MAGIC = b"258EAFA5-E914-47DA-95CA-C5AB0DC85B11"
_MAX_LINE = 1 << 20
_MAX_WS_PAYLOAD = 1 << 20

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class GatewayServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, addr: tuple[str, int], config: GatewayConfig, static_dir: str | None = None):
        self.gateway_config = config
        self.static_dir = os.path.abspath(static_dir) if static_dir else None
        super().__init__(addr, _ConnectionHandler)

    @property
    def bound_address(self) -> tuple[str, int]:
        host, port = self.server_address[:2]
        return str(host), int(port)


class _ConnectionHandler(socketserver.StreamRequestHandler):
    server: GatewayServer

    def handle(self) -> None:
        try:
            first = self.rfile.readline(_MAX_LINE)
        except OSError:
            return
        if not first:
            return
        match = _HTTP_REQUEST_RE.match(first.rstrip(b"\r\n"))
        if match:
            self._handle_http(match.group(1).decode(), match.group(2).decode())
        else:
            self._handle_line_session(first)

    # -- raw line protocol ---------------------------------------------------

    def _handle_line_session(self, first_line: bytes) -> None:
        session = Session(self.server.gateway_config)
        line = first_line
        while line:
            text = line.decode("utf-8", errors="replace").strip()
            if text:
                try:
                    for reply in session.handle_line(text):
                        self.wfile.write(reply.encode("utf-8") + b"\n")
                    self.wfile.flush()
                except OSError:
                    return
            try:
                line = self.rfile.readline(_MAX_LINE)
            except OSError:
                return

    # -- HTTP / WebSocket ----------------------------------------------------

    def _handle_http(self, method: str, path: str) -> None:
        headers: dict[str, str] = {}
        while True:
            raw = self.rfile.readline(_MAX_LINE)
            if raw in (b"\r\n", b"\n", b""):
                break
            name, _, value = raw.decode("latin-1").partition(":")
            headers[name.strip().lower()] = value.strip()

        path = path.split("?", 1)[0]
        if path == "/ws":
            if (
                method == "GET"
                and "websocket" in headers.get("upgrade", "").lower()
                and "sec-websocket-key" in headers
            ):
                self._handle_websocket(headers["sec-websocket-key"])
            else:
                self._http_response(400, b"expected a WebSocket upgrade\n")
            return
        if method not in ("GET", "HEAD"):
            self._http_response(405, b"method not allowed\n")
            return
        body, content_type = self._static_body(path)
        if body is None:
            self._http_response(404, b"not found\n")
            return
        self._http_response(200, b"" if method == "HEAD" else body, content_type, len(body))

    def _static_body(self, path: str) -> tuple[bytes | None, str]:
        if path == "/glyphs.json":
            data = resources.files("tactiguide").joinpath("assets/glyphs.json").read_bytes()
            return data, "application/json"
        if self.server.static_dir is None:
            return None, ""
        clean = posixpath.normpath(path.lstrip("/")) or "index.html"
        if clean.startswith(("..", "/")):
            return None, ""
        full = os.path.join(self.server.static_dir, clean)
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not os.path.isfile(full):
            return None, ""
        with open(full, "rb") as fh:
            data = fh.read()
        ext = os.path.splitext(full)[1].lower()
        return data, _CONTENT_TYPES.get(ext, "application/octet-stream")

    def _http_response(
        self, status: int, body: bytes, content_type: str = "text/plain; charset=utf-8",
        length: int | None = None,
    ) -> None:
        reason = {200: "OK", 400: "Bad Request", 404: "Not Found", 405: "Method Not Allowed"}[status]
        head = (
            f"HTTP/1.1 {status} {reason}\r\n"
            f"Content-Type: {content_type}\r\n"
            f"Content-Length: {length if length is not None else len(body)}\r\n"
            f"Connection: close\r\n\r\n"
        )
        try:
            self.wfile.write(head.encode("latin-1") + body)
            self.wfile.flush()
        except OSError:
            pass

    # -- WebSocket framing -----------------------------------------------------

    def _handle_websocket(self, key: str) -> None:
        accept = base64.b64encode(hashlib.sha1(key.encode("latin-1") + _WS_MAGIC).digest())
        handshake = (
            b"HTTP/1.1 101 Switching Protocols\r\n"
            b"Upgrade: websocket\r\n"
            b"Connection: Upgrade\r\n"
            b"Sec-WebSocket-Accept: " + accept + b"\r\n\r\n"
        )
        self.wfile.write(handshake)
        self.wfile.flush()

        session = Session(self.server.gateway_config)
        fragments: list[bytes] = []
        while True:
            frame = self._read_ws_frame()
            if frame is None:
                return
            fin, opcode, payload = frame
            if opcode == 0x8:  # close
                self._send_ws_frame(0x8, payload[:2])
                return
            if opcode == 0x9:  # ping
                self._send_ws_frame(0xA, payload)
                continue
            if opcode == 0xA:  # pong
                continue
            if opcode in (0x1, 0x0):
                fragments.append(payload)
                if not fin:
                    continue
                text = b"".join(fragments).decode("utf-8", errors="replace").strip()
                fragments = []
                if not text:
                    continue
                for reply in session.handle_line(text):
                    self._send_ws_frame(0x1, reply.encode("utf-8"))
            else:  # binary or reserved: refuse politely
                self._send_ws_frame(0x8, struct.pack("!H", 1003))
                return

    def _read_ws_frame(self) -> tuple[bool, int, bytes] | None:
        head = self._read_exact(2)
        if head is None:
            return None
        fin = bool(head[0] & 0x80)
        opcode = head[0] & 0x0F
        masked = bool(head[1] & 0x80)
        length = head[1] & 0x7F
        if length == 126:
            ext = self._read_exact(2)
            if ext is None:
                return None
            length = struct.unpack("!H", ext)[0]
        elif length == 127:
            ext = self._read_exact(8)
            if ext is None:
                return None
            length = struct.unpack("!Q", ext)[0]
        if length > _MAX_WS_PAYLOAD:
            return None
        mask = b"\x00\x00\x00\x00"
        if masked:
            mask_read = self._read_exact(4)
            if mask_read is None:
                return None
            mask = mask_read
        payload = self._read_exact(length) if length else b""
        if payload is None:
            return None
        if masked:
            payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        return fin, opcode, payload

    def _read_exact(self, count: int) -> bytes | None:
        data = b""
        while len(data) < count:
            try:
                chunk = self.rfile.read(count - len(data))
            except OSError:
                return None
            if not chunk:
                return None
            data += chunk
        return data

    def _send_ws_frame(self, opcode: int, payload: bytes) -> None:
        header = bytes([0x80 | opcode])
        n = len(payload)
        if n < 126:
            header += bytes([n])
        elif n < 1 << 16:
            header += bytes([126]) + struct.pack("!H", n)
        else:
            header += bytes([127]) + struct.pack("!Q", n)
        try:
            self.wfile.write(header + payload)
            self.wfile.flush()
        except OSError:
            pass


def parse_address(text: str) -> tuple[str, int]:
    """Parse HOST:PORT; raises ValueError with a usable message."""
    host, sep, port_text = text.rpartition(":")
    if not sep or not host:
        raise ValueError(f"address must look like HOST:PORT, got {text!r}")
    try:
        port = int(port_text)
    except ValueError:
        raise ValueError(f"port must be an integer, got {port_text!r}") from None
    if not 0 <= port <= 65535:
        raise ValueError(f"port must be in 0..65535, got {port}")
    return host, port
