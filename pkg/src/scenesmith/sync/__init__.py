"""Session replication: wire protocol, reducer, sessions, simulation."""

from .client import ReplicaClient
from .reducer import MUTATING_TYPES, RESERVED_PLACEMENT, RESERVED_STATE, apply_message
from .session import (
    Session,
    SessionHub,
    SubmitResult,
    replay_log,
    scene_from_snapshot,
)
from .sim import ScriptResult, SimResult, run_convergence_sim, run_script
from .tcp import TcpSyncClient, TcpSyncServer
from .wire import (
    MAX_FRAME_BYTES,
    PROTOCOL_VERSION,
    MessageType,
    WireMessage,
    decode_body,
    decode_frame,
    encode_frame,
    read_frame,
    write_frame,
)

__all__ = [
    "ReplicaClient",
    "MUTATING_TYPES",
    "RESERVED_PLACEMENT",
    "RESERVED_STATE",
    "apply_message",
    "Session",
    "SessionHub",
    "SubmitResult",
    "replay_log",
    "scene_from_snapshot",
    "ScriptResult",
    "SimResult",
    "run_convergence_sim",
    "run_script",
    "TcpSyncClient",
    "TcpSyncServer",
    "MAX_FRAME_BYTES",
    "PROTOCOL_VERSION",
    "MessageType",
    "WireMessage",
    "decode_body",
    "decode_frame",
    "encode_frame",
    "read_frame",
    "write_frame",
]
