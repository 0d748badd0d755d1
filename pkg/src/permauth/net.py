"""TCP transport: one framed connection per session."""

from __future__ import annotations

import logging
import socket
import socketserver
import threading
from typing import Callable

from . import wire
from .protocol import ChannelError, SessionOutcome, SessionPolicy, Verifier, run_verifier

log = logging.getLogger(__name__)


class SocketChannel:
    """Frame-level send/recv over a connected socket."""

    def __init__(self, sock: socket.socket, timeout: float | None = 30.0):
        self.sock = sock
        self.sock.settimeout(timeout)

    def send(self, msg: wire.Message):
        try:
            self.sock.sendall(wire.encode_frame(msg))
        except socket.timeout as e:
            raise ChannelError("send timed out") from e

    def _read_exact(self, n: int) -> bytes:
        buf = bytearray()
        while len(buf) < n:
            try:
                chunk = self.sock.recv(n - len(buf))
            except socket.timeout as e:
                raise ChannelError("timed out waiting for a frame") from e
            if not chunk:
                raise ChannelError("connection closed by peer")
            buf += chunk
        return bytes(buf)

    def recv(self) -> wire.Message:
        mtype, length = wire.parse_header(self._read_exact(wire.HEADER_SIZE))
        return wire.decode_message(mtype, self._read_exact(length))

    def close(self):
        try:
            self.sock.close()
        except OSError:
            pass


def connect(host: str, port: int, timeout: float = 30.0) -> SocketChannel:
    return SocketChannel(socket.create_connection((host, port), timeout=timeout), timeout)


class VerifierServer(socketserver.ThreadingTCPServer):
    """Accepts prover connections and runs one verifier session on each.

    *make_verifier* is called once per connection; the public key it closes
    over is shared read-only between sessions.  *on_session* receives each
    finished ``SessionOutcome``.
    """

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, make_verifier: Callable[[], Verifier], policy: SessionPolicy,
                 on_round=None, on_session=None):
        self.make_verifier = make_verifier
        self.policy = policy
        self.on_round = on_round
        self.on_session = on_session
        self.outcomes: list[SessionOutcome] = []
        self._lock = threading.Lock()
        super().__init__(address, _SessionHandler)


class _SessionHandler(socketserver.BaseRequestHandler):
    def handle(self):
        server: VerifierServer = self.server
        channel = SocketChannel(self.request, server.policy.timeout)
        outcome = run_verifier(server.make_verifier(), channel, server.policy, server.on_round)
        log.info("session from %s: %s", self.client_address,
                 "aborted" if outcome.aborted else ("accept" if outcome.accepted else "reject"))
        with server._lock:
            server.outcomes.append(outcome)
        if server.on_session is not None:
            server.on_session(outcome)
