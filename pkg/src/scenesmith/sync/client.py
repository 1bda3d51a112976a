"""Client-side replica: applies broadcasts in server order.

Transports may deliver broadcasts shuffled or duplicated; the replica
buffers anything early, drops anything already applied, and only ever
applies the message whose ``server_seq`` is exactly next. After the
same set of broadcasts reaches two replicas — in any order — their
scene hashes are equal.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from ..catalog.store import AssetInfoStore
from ..core.canonical import scene_hash
from ..core.scene import SceneGraph
from .reducer import MUTATING_TYPES, apply_message
from .session import scene_from_snapshot
from .wire import MessageType, WireMessage


@dataclass
class ReplicaClient:
    client_id: str
    session_id: str = ""
    scene: SceneGraph = field(default_factory=SceneGraph)
    asset_store: AssetInfoStore = field(default_factory=AssetInfoStore)

    def __post_init__(self):
        self._next_seq = 1
        self._buffer: dict[int, WireMessage] = {}
        self._client_seq = 0
        self._lock = threading.RLock()

    # --------------------------------------------------------- submitting

    def next_client_seq(self) -> int:
        with self._lock:
            self._client_seq += 1
            return self._client_seq

    def make_message(self, mtype: MessageType, payload: dict) -> WireMessage:
        return WireMessage(
            type=mtype,
            sender=self.client_id,
            session=self.session_id,
            client_seq=self.next_client_seq(),
            payload=payload,
        )

    # ---------------------------------------------------------- receiving

    def accept_snapshot(self, snapshot: WireMessage) -> None:
        with self._lock:
            self.scene = scene_from_snapshot(snapshot)
            self.session_id = snapshot.session or self.session_id
            self._next_seq = snapshot.server_seq + 1
            self._buffer.clear()

    def receive(self, message: WireMessage) -> int:
        """Ingest one broadcast; returns how many messages were applied.

        Early messages wait in the reorder buffer; stale duplicates are
        dropped. Acks and errors are control traffic, not state.
        """
        if message.type is MessageType.SNAPSHOT:
            self.accept_snapshot(message)
            return 1
        if message.type not in MUTATING_TYPES:
            return 0
        applied = 0
        with self._lock:
            seq = message.server_seq
            if seq < self._next_seq or seq in self._buffer:
                return 0  # duplicate delivery
            self._buffer[seq] = message
            while self._next_seq in self._buffer:
                pending = self._buffer.pop(self._next_seq)
                apply_message(self.scene, pending, self.asset_store)
                self._next_seq += 1
                applied += 1
        return applied

    # --------------------------------------------------------- inspection

    @property
    def applied_through(self) -> int:
        with self._lock:
            return self._next_seq - 1

    def pending_count(self) -> int:
        with self._lock:
            return len(self._buffer)

    def replica_hash(self) -> str:
        with self._lock:
            return scene_hash(self.scene)
