"""Wire protocol: message vocabulary and binary framing.

Every frame on a byte stream is::

    4-byte big-endian body length | body

where the body's first byte is the protocol version and the rest is one
UTF-8 JSON document describing a :class:`WireMessage`. The same JSON
body travels unframed over transports with native message boundaries
(WebSocket); the version byte is only needed where framing is ours.

``server_seq`` establishes the total order: the hub assigns it when it
accepts a message, and every replica applies messages in ``server_seq``
order regardless of arrival order. ``(sender, client_seq)`` identifies a
submission for deduplication.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

PROTOCOL_VERSION = 1
MAX_FRAME_BYTES = 8 * 1024 * 1024


class MessageType(Enum):
    JOIN = "Join"
    SNAPSHOT = "Snapshot"
    SPAWN_PLACEHOLDER = "SpawnPlaceholder"
    REGISTER_PREFAB = "RegisterPrefab"
    MESH_UPDATE = "MeshUpdate"
    ATTACH_BEHAVIOR = "AttachBehavior"
    PROPERTY_RPC = "PropertyRPC"
    DESPAWN = "Despawn"
    ACK = "Ack"
    ERROR = "Error"


@dataclass(frozen=True)
class WireMessage:
    type: MessageType
    sender: str
    session: str = ""
    client_seq: int = 0
    server_seq: int = 0
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.client_seq < 0 or self.server_seq < 0:
            raise ValueError("sequence numbers must be non-negative")

    def with_server_seq(self, seq: int) -> "WireMessage":
        return replace(self, server_seq=seq)

    def to_json(self) -> str:
        return json.dumps(
            {
                "client_seq": self.client_seq,
                "payload": self.payload,
                "sender": self.sender,
                "server_seq": self.server_seq,
                "session": self.session,
                "type": self.type.value,
            },
            sort_keys=True,
            ensure_ascii=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "WireMessage":
        doc = json.loads(text)
        return cls(
            type=MessageType(doc["type"]),
            sender=doc["sender"],
            session=doc.get("session", ""),
            client_seq=doc.get("client_seq", 0),
            server_seq=doc.get("server_seq", 0),
            payload=doc.get("payload", {}),
        )


def encode_frame(message: WireMessage) -> bytes:
    body = bytes([PROTOCOL_VERSION]) + message.to_json().encode("utf-8")
    if len(body) > MAX_FRAME_BYTES:
        raise ValueError("frame exceeds maximum size")
    return len(body).to_bytes(4, "big") + body


def decode_frame(frame: bytes) -> WireMessage:
    """Decode one complete frame (length prefix included)."""
    if len(frame) < 5:
        raise ValueError("frame too short")
    length = int.from_bytes(frame[:4], "big")
    body = frame[4:]
    if len(body) != length:
        raise ValueError("frame length mismatch")
    return decode_body(body)


def decode_body(body: bytes) -> WireMessage:
    if not body:
        raise ValueError("empty frame body")
    if body[0] != PROTOCOL_VERSION:
        raise ValueError(f"unsupported protocol version {body[0]}")
    return WireMessage.from_json(body[1:].decode("utf-8"))


def read_frame(stream) -> WireMessage | None:
    """Read one frame from a blocking byte stream; None on clean EOF."""
    header = _read_exactly(stream, 4)
    if header is None:
        return None
    length = int.from_bytes(header, "big")
    if length == 0 or length > MAX_FRAME_BYTES:
        raise ValueError(f"invalid frame length {length}")
    body = _read_exactly(stream, length)
    if body is None:
        raise ValueError("stream ended mid-frame")
    return decode_body(body)


def write_frame(stream, message: WireMessage) -> None:
    stream.write(encode_frame(message))
    stream.flush()


def _read_exactly(stream, n: int) -> bytes | None:
    chunks = b""
    while len(chunks) < n:
        piece = stream.read(n - len(chunks))
        if not piece:
            if chunks:
                raise ValueError("stream ended mid-frame")
            return None
        chunks += piece
    return chunks
