"""Framed TCP transport for the session hub.

One connection = one client. The first frame must be a Join naming the
session and sender; the server answers with a Snapshot and then fans
out every accepted broadcast to all connections in that session. The
protocol bytes are exactly those of :mod:`scenesmith.sync.wire`.
"""

from __future__ import annotations

import queue
import socket
import socketserver
import threading

from ..errors import SyncError
from .client import ReplicaClient
from .session import SessionHub
from .wire import MessageType, WireMessage, read_frame, write_frame


class _Connection:
    def __init__(self, wfile):
        self._wfile = wfile
        self._lock = threading.Lock()

    def send(self, message: WireMessage) -> bool:
        try:
            with self._lock:
                write_frame(self._wfile, message)
            return True
        except OSError:
            return False


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        server: TcpSyncServer = self.server.owner  # type: ignore[attr-defined]
        conn = _Connection(self.wfile)
        session_id = None
        try:
            join = read_frame(self.rfile)
            if join is None or join.type is not MessageType.JOIN:
                conn.send(
                    WireMessage(
                        type=MessageType.ERROR,
                        sender="server",
                        payload={"error": "ProtocolError", "detail": "expected Join"},
                    )
                )
                return
            try:
                snapshot = server.hub.join(join.session, join.sender)
            except SyncError as exc:
                conn.send(
                    WireMessage(
                        type=MessageType.ERROR,
                        sender="server",
                        session=join.session,
                        payload={"error": type(exc).__name__, "detail": str(exc)},
                    )
                )
                return
            session_id = join.session
            server.register(session_id, conn)
            conn.send(snapshot)

            while True:
                message = read_frame(self.rfile)
                if message is None:
                    return
                result = server.hub.get(session_id).submit(message)
                conn.send(result.reply)
                if result.broadcasts:
                    server.broadcast(session_id, result.broadcasts)
        except (ValueError, OSError):
            return
        finally:
            if session_id is not None:
                server.unregister(session_id, conn)


class _ThreadingServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class TcpSyncServer:
    def __init__(self, hub: SessionHub | None = None, host: str = "127.0.0.1", port: int = 0):
        self.hub = hub or SessionHub()
        self._server = _ThreadingServer((host, port), _Handler)
        self._server.owner = self  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None
        self._conns: dict[str, list[_Connection]] = {}
        self._lock = threading.Lock()

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address  # type: ignore[return-value]

    def start(self) -> None:
        self._thread = threading.Thread(
            target=self._server.serve_forever, name="tcp-sync", daemon=True
        )
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def register(self, session_id: str, conn: _Connection) -> None:
        with self._lock:
            self._conns.setdefault(session_id, []).append(conn)

    def unregister(self, session_id: str, conn: _Connection) -> None:
        with self._lock:
            conns = self._conns.get(session_id, [])
            if conn in conns:
                conns.remove(conn)

    def broadcast(self, session_id: str, messages) -> None:
        with self._lock:
            conns = list(self._conns.get(session_id, []))
        for message in messages:
            for conn in conns:
                conn.send(message)


class TcpSyncClient:
    """Blocking client: joins a session and mirrors it into a replica."""

    def __init__(self, host: str, port: int, session_id: str, client_id: str, timeout: float = 10.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._rfile = self._sock.makefile("rb")
        self._wfile = self._sock.makefile("wb")
        self.replica = ReplicaClient(client_id=client_id, session_id=session_id)
        self._replies: "queue.Queue[WireMessage]" = queue.Queue()
        self._snapshot_ready = threading.Event()
        self._closed = False

        write_frame(
            self._wfile,
            WireMessage(type=MessageType.JOIN, sender=client_id, session=session_id),
        )
        first = read_frame(self._rfile)
        if first is None:
            raise ConnectionError("server closed during join")
        if first.type is MessageType.ERROR:
            detail = first.payload.get("detail", "join rejected")
            self.close()
            raise SyncError(detail)
        self.replica.accept_snapshot(first)
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    def _pump(self) -> None:
        try:
            while True:
                message = read_frame(self._rfile)
                if message is None:
                    return
                if message.type in (MessageType.ACK, MessageType.ERROR):
                    self._replies.put(message)
                else:
                    self.replica.receive(message)
        except (ValueError, OSError):
            return

    def submit(self, mtype: MessageType, payload: dict, timeout: float = 10.0) -> WireMessage:
        message = self.replica.make_message(mtype, payload)
        write_frame(self._wfile, message)
        return self._replies.get(timeout=timeout)

    def close(self) -> None:
        if not self._closed:
            self._closed = True
            try:
                self._sock.close()
            except OSError:
                pass
