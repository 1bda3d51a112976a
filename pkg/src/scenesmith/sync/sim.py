"""Multi-client replication simulations.

Two entry points:

- :func:`run_convergence_sim` drives a seeded random op schedule through
  one session and delivers the broadcast stream to every replica in a
  shuffled, partially duplicated order. It reports the replica hashes
  next to the authoritative one — with the reorder buffer doing its job
  they are always identical.
- :func:`run_script` executes a line-oriented script (``client action
  args...``) with immediate in-order delivery, for demos and the CLI.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..core.canonical import object_doc
from ..core.geometry import Extents, Placement, Vec3
from ..core.lifecycle import PlaceholderState
from ..core.scene import SceneObject
from .client import ReplicaClient
from .session import Session, SessionHub
from .wire import MessageType, WireMessage

_NOUNS = (
    "lamp", "crate", "fern", "stool", "kite", "drum", "vase", "cart",
    "banner", "orb", "plinth", "lantern",
)


@dataclass
class SimResult:
    authoritative_hash: str
    replica_hashes: dict[str, str]
    converged: bool
    ops_submitted: int
    ops_accepted: int
    broadcasts: int
    duplicates_delivered: int
    ownership_violations: int
    undelivered: int

    def summary(self) -> str:
        lines = [
            f"clients: {len(self.replica_hashes)}",
            f"ops submitted/accepted: {self.ops_submitted}/{self.ops_accepted}",
            f"broadcasts: {self.broadcasts} (+{self.duplicates_delivered} duplicate deliveries)",
            f"ownership violations: {self.ownership_violations}",
            f"authoritative: {self.authoritative_hash}",
        ]
        for cid in sorted(self.replica_hashes):
            mark = "=" if self.replica_hashes[cid] == self.authoritative_hash else "!"
            lines.append(f"  {cid}: {self.replica_hashes[cid]} {mark}")
        lines.append(f"converged: {str(self.converged).lower()}")
        return "\n".join(lines)


def _spawn_doc(name: str, owner: str, rng: random.Random) -> dict:
    obj = SceneObject(
        id="tmp",
        name=name,
        extents=Extents(
            rng.randint(1, 4) * 0.5, rng.randint(1, 4) * 0.5, rng.randint(1, 6) * 0.5
        ),
        placement=Placement(
            position=Vec3(
                float(rng.randint(-6, 6)), float(rng.randint(-6, 6)), 0.0
            ),
            yaw_deg=rng.choice((0, 90, 180, 270)),
        ),
        state=PlaceholderState.PROPOSED,
        owner=owner,
    )
    return object_doc(obj)


def run_convergence_sim(
    n_clients: int, n_ops: int, seed: int, duplicate_rate: float = 0.1
) -> SimResult:
    """One seeded schedule: random legal ops, shuffled delivery, hashes."""
    if not 2 <= n_clients <= 26:
        raise ValueError("n_clients must be between 2 and 26")
    if n_ops < 1:
        raise ValueError("n_ops must be >= 1")
    rng = random.Random(seed)
    session = Session(session_id=f"sim-{seed}")
    clients: dict[str, ReplicaClient] = {}
    inboxes: dict[str, list[WireMessage]] = {}
    for i in range(n_clients):
        cid = f"client-{chr(ord('a') + i)}"
        snapshot = session.join(cid)
        replica = ReplicaClient(client_id=cid)
        replica.accept_snapshot(snapshot)
        clients[cid] = replica
        inboxes[cid] = []

    spawn_counts = {cid: 0 for cid in clients}
    accepted = 0
    violations = 0
    submitted = 0
    recent: list[WireMessage] = []

    for _ in range(n_ops):
        cid = rng.choice(sorted(clients))
        replica = clients[cid]
        authoritative = session.scene
        all_ids = sorted(authoritative.objects)
        own_ids = [
            oid for oid in all_ids if authoritative.objects[oid].owner == cid
        ]
        own_proposed = [
            oid
            for oid in own_ids
            if authoritative.objects[oid].state is PlaceholderState.PROPOSED
        ]

        roll = rng.random()
        if roll < 0.30 or not all_ids:
            spawn_counts[cid] += 1
            oid = f"{cid}-obj-{spawn_counts[cid]}"
            message = replica.make_message(
                MessageType.SPAWN_PLACEHOLDER,
                {
                    "object_id": oid,
                    "object": _spawn_doc(rng.choice(_NOUNS), cid, rng),
                },
            )
        elif roll < 0.50:
            oid = rng.choice(all_ids)
            message = replica.make_message(
                MessageType.PROPERTY_RPC,
                {
                    "object_id": oid,
                    "key": "@placement",
                    "value": {
                        "position": [
                            float(rng.randint(-8, 8)),
                            float(rng.randint(-8, 8)),
                            0.0,
                        ],
                        "yaw_deg": rng.choice((0, 90, 180, 270)),
                    },
                },
            )
        elif roll < 0.65:
            oid = rng.choice(all_ids)
            message = replica.make_message(
                MessageType.PROPERTY_RPC,
                {
                    "object_id": oid,
                    "key": rng.choice(("color", "tag", "note")),
                    "value": rng.choice(("red", "blue", "green", "tall", "old")),
                },
            )
        elif roll < 0.78 and own_proposed:
            oid = rng.choice(own_proposed)
            message = replica.make_message(
                MessageType.REGISTER_PREFAB,
                {"object_id": oid, "asset_uid": f"sim/{oid}", "state": "FirstPass"},
            )
        elif roll < 0.90:
            oid = rng.choice(all_ids)
            message = replica.make_message(
                MessageType.ATTACH_BEHAVIOR,
                {
                    "object_id": oid,
                    "behavior": {
                        "behavior_id": f"{cid}-bhv-{replica.next_client_seq()}",
                        "kind": "grabbable",
                        "parameters": {},
                    },
                },
            )
        elif own_ids:
            oid = rng.choice(own_ids)
            message = replica.make_message(MessageType.DESPAWN, {"object_id": oid})
        else:
            continue

        submitted += 1
        result = session.submit(message)
        if result.reply.payload.get("error") == "OwnershipViolation":
            violations += 1
        if result.accepted:
            accepted += 1
        recent.append(message)
        for broadcast in result.broadcasts:
            for inbox in inboxes.values():
                inbox.append(broadcast)

        # Occasionally re-submit an old message verbatim: the server must
        # acknowledge without re-applying or re-broadcasting.
        if recent and rng.random() < duplicate_rate:
            dup = rng.choice(recent)
            dup_result = session.submit(dup)
            assert not dup_result.broadcasts, "duplicate submission re-broadcast"

    duplicates = 0
    for cid, replica in clients.items():
        inbox = list(inboxes[cid])
        extra = rng.sample(inbox, k=min(len(inbox), max(1, len(inbox) // 10)))
        duplicates += len(extra)
        inbox.extend(extra)
        rng.shuffle(inbox)
        for message in inbox:
            replica.receive(message)

    replica_hashes = {cid: r.replica_hash() for cid, r in clients.items()}
    authoritative_hash = session.replica_hash()
    undelivered = sum(r.pending_count() for r in clients.values())
    converged = (
        all(h == authoritative_hash for h in replica_hashes.values())
        and undelivered == 0
    )
    return SimResult(
        authoritative_hash=authoritative_hash,
        replica_hashes=replica_hashes,
        converged=converged,
        ops_submitted=submitted,
        ops_accepted=accepted,
        broadcasts=len(session.log),
        duplicates_delivered=duplicates,
        ownership_violations=violations,
        undelivered=undelivered,
    )


# ---------------------------------------------------------------- scripts


@dataclass
class ScriptResult:
    lines: list[str] = field(default_factory=list)
    converged: bool = True
    authoritative_hash: str = ""
    log_lines: list[str] = field(default_factory=list)

    def output(self) -> str:
        return "\n".join(self.lines)


def run_script(text: str, session_id: str = "scripted") -> ScriptResult:
    """Execute a line-oriented session script with in-order delivery.

    Grammar (one op per line, ``#`` comments allowed)::

        <client> join
        <client> spawn <name> [x y z]
        <client> move <object_id> <x> <y> <z>
        <client> prop <object_id> <key> <value>
        <client> register <object_id> <asset_uid>
        <client> attach <object_id> <kind>
        <client> despawn <object_id>
    """
    hub = SessionHub()
    session = hub.create_session(session_id)
    clients: dict[str, ReplicaClient] = {}
    spawn_counts: dict[str, int] = {}
    result = ScriptResult()
    rng = random.Random(0)

    def deliver(broadcasts) -> None:
        for broadcast in broadcasts:
            for replica in clients.values():
                replica.receive(broadcast)

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        cid, action, args = parts[0], parts[1].lower(), parts[2:]

        if action == "join":
            snapshot = session.join(cid)
            replica = ReplicaClient(client_id=cid)
            replica.accept_snapshot(snapshot)
            clients[cid] = replica
            spawn_counts[cid] = 0
            result.lines.append(f"{cid} join -> ok")
            continue

        replica = clients.get(cid)
        if replica is None:
            result.lines.append(f"{cid} {action} -> error(UnknownClient)")
            continue

        if action == "spawn":
            name = args[0] if args else "crate"
            spawn_counts[cid] += 1
            oid = f"{cid}-obj-{spawn_counts[cid]}"
            doc = _spawn_doc(name, cid, rng)
            if len(args) >= 4:
                doc["placement"]["position"] = [float(a) for a in args[1:4]]
            message = replica.make_message(
                MessageType.SPAWN_PLACEHOLDER, {"object_id": oid, "object": doc}
            )
        elif action == "move":
            message = replica.make_message(
                MessageType.PROPERTY_RPC,
                {
                    "object_id": args[0],
                    "key": "@placement",
                    "value": {"position": [float(a) for a in args[1:4]]},
                },
            )
        elif action == "prop":
            message = replica.make_message(
                MessageType.PROPERTY_RPC,
                {"object_id": args[0], "key": args[1], "value": " ".join(args[2:])},
            )
        elif action == "register":
            message = replica.make_message(
                MessageType.REGISTER_PREFAB,
                {"object_id": args[0], "asset_uid": args[1], "state": "FirstPass"},
            )
        elif action == "attach":
            message = replica.make_message(
                MessageType.ATTACH_BEHAVIOR,
                {
                    "object_id": args[0],
                    "behavior": {
                        "behavior_id": f"{cid}-bhv-{replica.next_client_seq()}",
                        "kind": args[1] if len(args) > 1 else "grabbable",
                        "parameters": (
                            {"spawned_shape": args[2]}
                            if len(args) > 2 and args[1] == "spawner_tool"
                            else {"description": " ".join(args[2:])}
                            if len(args) > 2 and args[1] == "custom"
                            else {}
                        ),
                    },
                },
            )
        elif action == "despawn":
            message = replica.make_message(
                MessageType.DESPAWN, {"object_id": args[0]}
            )
        else:
            result.lines.append(f"{cid} {action} -> error(UnknownAction)")
            continue

        submit = session.submit(message)
        deliver(submit.broadcasts)
        if submit.reply.type is MessageType.ERROR:
            result.lines.append(
                f"{cid} {action} -> error({submit.reply.payload['error']})"
            )
        else:
            note = "queued" if submit.reply.payload.get("queued") else "ok"
            result.lines.append(f"{cid} {action} -> {note}")

    authoritative = session.replica_hash()
    result.lines.append(f"authoritative {authoritative}")
    for cid in sorted(clients):
        h = clients[cid].replica_hash()
        result.lines.append(f"replica {cid} {h}")
        if h != authoritative:
            result.converged = False
    result.lines.append(f"converged: {str(result.converged).lower()}")
    result.authoritative_hash = authoritative
    result.log_lines = session.export_log()
    return result
