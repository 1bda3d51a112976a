"""Deterministic message application shared by server and replicas.

Convergence rests on one property: applying the same messages in the
same (server_seq) order to the same starting scene yields bit-identical
scenes. Everything here is therefore a pure function of (scene, message)
— no clocks, no randomness, no per-host state.

Two reserved PropertyRPC keys mutate structured fields instead of the
free-form property bag: ``@placement`` (position/yaw/scale) and
``@state`` (placeholder lifecycle value).
"""

from __future__ import annotations

import dataclasses

from ..core.canonical import object_from_doc
from ..core.geometry import Placement, Vec3
from ..core.lifecycle import PlaceholderState
from ..core.scene import BehaviorDescriptor, SceneGraph
from ..errors import UnknownObject
from .wire import MessageType, WireMessage

RESERVED_PLACEMENT = "@placement"
RESERVED_STATE = "@state"


def _require(scene: SceneGraph, object_id: str):
    obj = scene.objects.get(object_id)
    if obj is None:
        raise UnknownObject(f"no object {object_id!r} in scene")
    return obj


def apply_message(scene: SceneGraph, message: WireMessage, asset_store=None) -> None:
    """Apply one accepted message to a scene in place.

    Raises UnknownObject (and lets dataclass validation errors surface)
    rather than silently skipping: a replica that cannot apply an
    accepted message has diverged and must not pretend otherwise.
    """
    mtype = message.type
    payload = message.payload

    if mtype is MessageType.SPAWN_PLACEHOLDER:
        obj = object_from_doc(payload["object_id"], payload["object"])
        scene.add_object(obj)

    elif mtype is MessageType.REGISTER_PREFAB:
        obj = _require(scene, payload["object_id"])
        updated = dataclasses.replace(
            obj,
            asset_uid=payload.get("asset_uid", obj.asset_uid),
            state=PlaceholderState(payload.get("state", PlaceholderState.FIRST_PASS.value)),
        )
        scene.replace_object(updated)

    elif mtype is MessageType.MESH_UPDATE:
        obj = _require(scene, payload["object_id"])
        info = payload["asset_info"]
        state = obj.state
        if state is PlaceholderState.PROPOSED:
            state = PlaceholderState.FIRST_PASS
        scene.replace_object(
            dataclasses.replace(obj, asset_uid=info["uid"], state=state)
        )
        if asset_store is not None:
            from ..catalog.store import AssetInfoRecord

            asset_store.put(AssetInfoRecord.from_payload(info))

    elif mtype is MessageType.ATTACH_BEHAVIOR:
        obj = _require(scene, payload["object_id"])
        bd = payload["behavior"]
        descriptor = BehaviorDescriptor(
            behavior_id=bd["behavior_id"],
            kind=bd["kind"],
            parameters=dict(bd.get("parameters", {})),
            target_object_id=payload["object_id"],
        )
        scene.replace_object(
            dataclasses.replace(obj, behaviors=obj.behaviors + (descriptor,))
        )

    elif mtype is MessageType.PROPERTY_RPC:
        obj = _require(scene, payload["object_id"])
        key, value = payload["key"], payload["value"]
        if key == RESERVED_PLACEMENT:
            placement = Placement(
                position=Vec3(*value["position"]),
                yaw_deg=value.get("yaw_deg", obj.placement.yaw_deg),
                scale=value.get("scale", obj.placement.scale),
            )
            scene.replace_object(dataclasses.replace(obj, placement=placement))
        elif key == RESERVED_STATE:
            scene.replace_object(
                dataclasses.replace(obj, state=PlaceholderState(value))
            )
        else:
            props = dict(obj.properties)
            props[key] = value
            scene.replace_object(dataclasses.replace(obj, properties=props))

    elif mtype is MessageType.DESPAWN:
        _require(scene, payload["object_id"])
        scene.remove_object(payload["object_id"])

    else:
        raise ValueError(f"message type {mtype.value} does not mutate scene state")


MUTATING_TYPES = frozenset(
    {
        MessageType.SPAWN_PLACEHOLDER,
        MessageType.REGISTER_PREFAB,
        MessageType.MESH_UPDATE,
        MessageType.ATTACH_BEHAVIOR,
        MessageType.PROPERTY_RPC,
        MessageType.DESPAWN,
    }
)
