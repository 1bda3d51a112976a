"""Authoritative session state and the hub that hosts sessions.

The server is the single writer: clients submit intents, the session
validates them, assigns the next ``server_seq``, applies the message to
the authoritative scene, and hands back the ordered broadcast list.
Replicas apply broadcasts in ``server_seq`` order and necessarily
converge on the same scene (see reducer.py for why).

Rules enforced here rather than in the reducer, because they are
policy, not state arithmetic:

- duplicate ``(sender, client_seq)`` submissions are acknowledged again
  but never re-applied or re-broadcast;
- RegisterPrefab, MeshUpdate and Despawn are owner-only (ownership is
  fixed at spawn; there is no transfer);
- AttachBehavior aimed at a placeholder that has no prefab yet is
  queued and flushed — in submission order — the moment the prefab
  registers.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from ..catalog.store import AssetInfoStore
from ..core.canonical import canonical_scene_text, parse_canonical_scene, scene_hash
from ..core.lifecycle import PlaceholderState
from ..core.scene import SceneGraph
from ..errors import (
    DuplicateClient,
    OwnershipViolation,
    SyncError,
    UnknownClient,
    UnknownObject,
    UnknownSession,
)
from .reducer import MUTATING_TYPES, apply_message
from .wire import MessageType, WireMessage

_OWNER_ONLY = frozenset(
    {MessageType.REGISTER_PREFAB, MessageType.MESH_UPDATE, MessageType.DESPAWN}
)


@dataclass(frozen=True)
class SubmitResult:
    accepted: bool
    reply: WireMessage
    broadcasts: tuple[WireMessage, ...] = ()


@dataclass
class Session:
    session_id: str
    scene: SceneGraph = field(default_factory=SceneGraph)
    asset_store: AssetInfoStore = field(default_factory=AssetInfoStore)

    def __post_init__(self):
        self.log: list[WireMessage] = []
        self._clients: dict[str, set[int]] = {}
        self._seq_by_submission: dict[tuple[str, int], int] = {}
        self._server_seq = 0
        self._pending_attach: dict[str, list[WireMessage]] = {}
        self._lock = threading.RLock()

    # ------------------------------------------------------------ clients

    def join(self, client_id: str) -> WireMessage:
        """Register a client and return its state snapshot."""
        if not client_id:
            raise UnknownClient("client id must be non-empty")
        with self._lock:
            if client_id in self._clients:
                raise DuplicateClient(
                    f"client {client_id!r} already joined session {self.session_id}"
                )
            self._clients[client_id] = set()
            return self._snapshot_for(client_id)

    def clients(self) -> list[str]:
        with self._lock:
            return sorted(self._clients)

    def _snapshot_for(self, client_id: str) -> WireMessage:
        return WireMessage(
            type=MessageType.SNAPSHOT,
            sender="server",
            session=self.session_id,
            server_seq=self._server_seq,
            payload={
                "scene": canonical_scene_text(self.scene),
                "hash": scene_hash(self.scene),
                "client_id": client_id,
            },
        )

    # ------------------------------------------------------------- submit

    def submit(self, message: WireMessage) -> SubmitResult:
        """Validate, order, apply and fan out one client submission."""
        with self._lock:
            try:
                return self._submit_locked(message)
            except (SyncError, ValueError, KeyError) as exc:
                return SubmitResult(
                    accepted=False,
                    reply=self._error_reply(message, exc),
                )

    def _submit_locked(self, message: WireMessage) -> SubmitResult:
        if message.session and message.session != self.session_id:
            raise UnknownSession(f"message addressed to {message.session!r}")
        if message.sender not in self._clients:
            raise UnknownClient(f"sender {message.sender!r} never joined")
        if message.type not in MUTATING_TYPES:
            raise SyncError(f"clients cannot submit {message.type.value} messages")

        submission = (message.sender, message.client_seq)
        if message.client_seq in self._clients[message.sender]:
            return SubmitResult(
                accepted=False,
                reply=self._ack(
                    message, self._seq_by_submission.get(submission, 0), duplicate=True
                ),
            )

        self._validate_ownership(message)

        if self._should_defer(message):
            self._clients[message.sender].add(message.client_seq)
            self._pending_attach.setdefault(
                message.payload["object_id"], []
            ).append(message)
            return SubmitResult(
                accepted=True, reply=self._ack(message, 0, queued=True)
            )

        broadcasts = [self._accept(message)]
        if message.type is MessageType.REGISTER_PREFAB:
            broadcasts.extend(self._flush_attaches(message.payload["object_id"]))
        self._clients[message.sender].add(message.client_seq)
        self._seq_by_submission[submission] = broadcasts[0].server_seq
        return SubmitResult(
            accepted=True,
            reply=self._ack(message, broadcasts[0].server_seq),
            broadcasts=tuple(broadcasts),
        )

    def _accept(self, message: WireMessage) -> WireMessage:
        ordered = message.with_server_seq(self._server_seq + 1)
        apply_message(self.scene, ordered, self.asset_store)
        self._server_seq += 1
        self.log.append(ordered)
        return ordered

    def _validate_ownership(self, message: WireMessage) -> None:
        if message.type is MessageType.SPAWN_PLACEHOLDER:
            claimed = message.payload.get("object", {}).get("owner", "")
            if claimed and claimed != message.sender:
                raise OwnershipViolation(
                    f"{message.sender!r} cannot spawn an object owned by {claimed!r}"
                )
            return
        if message.type not in _OWNER_ONLY:
            return
        object_id = message.payload.get("object_id", "")
        obj = self.scene.objects.get(object_id)
        if obj is None:
            raise UnknownObject(f"no object {object_id!r} in scene")
        if obj.owner and obj.owner != message.sender:
            raise OwnershipViolation(
                f"{message.sender!r} cannot mutate {object_id!r} owned by {obj.owner!r}"
            )

    def _should_defer(self, message: WireMessage) -> bool:
        if message.type is not MessageType.ATTACH_BEHAVIOR:
            return False
        object_id = message.payload.get("object_id", "")
        obj = self.scene.objects.get(object_id)
        if obj is None:
            raise UnknownObject(f"no object {object_id!r} in scene")
        return obj.state is PlaceholderState.PROPOSED

    def _flush_attaches(self, object_id: str) -> list[WireMessage]:
        pending = self._pending_attach.pop(object_id, [])
        flushed = []
        for queued in pending:  # FIFO: submission order is preserved
            ordered = self._accept(queued)
            self._seq_by_submission[(queued.sender, queued.client_seq)] = (
                ordered.server_seq
            )
            flushed.append(ordered)
        return flushed

    # -------------------------------------------------------------- sends

    def _ack(
        self, message: WireMessage, server_seq: int, duplicate=False, queued=False
    ) -> WireMessage:
        payload = {"client_seq": message.client_seq, "of": message.type.value}
        if duplicate:
            payload["duplicate"] = True
        if queued:
            payload["queued"] = True
        return WireMessage(
            type=MessageType.ACK,
            sender="server",
            session=self.session_id,
            server_seq=server_seq,
            payload=payload,
        )

    def _error_reply(self, message: WireMessage, exc: Exception) -> WireMessage:
        return WireMessage(
            type=MessageType.ERROR,
            sender="server",
            session=self.session_id,
            payload={
                "client_seq": message.client_seq,
                "error": type(exc).__name__,
                "detail": str(exc),
            },
        )

    # ------------------------------------------------------------- replay

    def replica_hash(self) -> str:
        with self._lock:
            return scene_hash(self.scene)

    def export_log(self) -> list[str]:
        with self._lock:
            return [m.to_json() for m in self.log]


def replay_log(lines) -> SceneGraph:
    """Rebuild the authoritative scene from an exported message log."""
    scene = SceneGraph()
    for line in lines:
        line = line.strip()
        if not line:
            continue
        apply_message(scene, WireMessage.from_json(line))
    return scene


def scene_from_snapshot(snapshot: WireMessage) -> SceneGraph:
    if snapshot.type is not MessageType.SNAPSHOT:
        raise ValueError("not a snapshot message")
    return parse_canonical_scene(snapshot.payload["scene"])


class SessionHub:
    """Hosts sessions; the transport layer talks to this object only."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._counter = itertools.count(1)
        self._lock = threading.RLock()

    def create_session(self, session_id: str | None = None) -> Session:
        with self._lock:
            sid = session_id or f"session-{next(self._counter)}"
            if sid in self._sessions:
                raise ValueError(f"session {sid!r} already exists")
            session = Session(session_id=sid)
            self._sessions[sid] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session

    def session_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._sessions)

    def join(self, session_id: str, client_id: str) -> WireMessage:
        return self.get(session_id).join(client_id)
