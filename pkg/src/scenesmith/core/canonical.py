"""Canonical scene serialization.

One deterministic text form feeds snapshots, replica hashing, fixtures and
the sketchpad's textual scene state. The rules, which the TypeScript client
mirrors byte for byte:

- JSON-shaped document, keys emitted in sorted order, compact separators,
  ASCII-escaped strings.
- Reals are fixed to 6 decimal places with round-half-even ('%.6f').
- Integers (revision, yaw_deg, octaves, seed) are emitted bare; any number
  inside `properties` or behavior `parameters` is treated as a real.
"""

from __future__ import annotations

import hashlib
import json

from scenesmith.core.geometry import Extents, Placement, Vec3
from scenesmith.core.lifecycle import PlaceholderState
from scenesmith.core.scene import BehaviorDescriptor, SceneGraph, SceneObject


def _f(x) -> str:
    return format(float(x), ".6f")


def _s(s: str) -> str:
    return json.dumps(s, ensure_ascii=True)


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return _f(v)
    if isinstance(v, str):
        return _s(v)
    raise TypeError(f"unsupported scalar {type(v)}")


def _kv_map(d: dict) -> str:
    inner = ",".join(f"{_s(k)}:{_scalar(d[k])}" for k in sorted(d))
    return "{" + inner + "}"


def _vec(v) -> str:
    return f"[{_f(v[0])},{_f(v[1])},{_f(v[2])}]"


def _behavior(b: BehaviorDescriptor) -> str:
    return (
        "{"
        f'"behavior_id":{_s(b.behavior_id)},'
        f'"kind":{_s(b.kind)},'
        f'"parameters":{_kv_map(b.parameters)},'
        f'"target":{_s(b.target_object_id)}'
        "}"
    )


def _object(o: SceneObject) -> str:
    return (
        "{"
        f'"asset_uid":{_s(o.asset_uid) if o.asset_uid is not None else "null"},'
        f'"behaviors":[{",".join(_behavior(b) for b in o.behaviors)}],'
        f'"extents":{_vec(o.extents.as_tuple())},'
        f'"name":{_s(o.name)},'
        f'"owner":{_s(o.owner) if o.owner is not None else "null"},'
        '"placement":{'
        f'"position":{_vec(o.placement.position.as_tuple())},'
        f'"scale":{_f(o.placement.scale)},'
        f'"yaw_deg":{o.placement.yaw_deg}'
        "},"
        f'"properties":{_kv_map(o.properties)},'
        f'"state":{_s(o.state.value)}'
        "}"
    )


def _environment(env) -> str:
    if env is None:
        return "null"
    if env.noise is None:
        noise = "null"
    else:
        n = env.noise
        noise = (
            "{"
            f'"amplitude":{_f(n.amplitude)},'
            f'"frequency":{_f(n.frequency)},'
            f'"octaves":{n.octaves},'
            f'"persistence":{_f(n.persistence)}'
            "}"
        )
    if env.elevation_ref is None:
        elev = "null"
    else:
        e = env.elevation_ref
        elev = f'{{"extent_m":{_f(e.extent_m)},"lat":{_f(e.lat)},"lon":{_f(e.lon)}}}'
    fallbacks = ",".join(_s(c) for c in env.fallbacks)
    return (
        "{"
        f'"elevation_ref":{elev},'
        f'"fallbacks":[{fallbacks}],'
        f'"material":{_s(env.material)},'
        f'"noise":{noise},'
        f'"realism":{_s(env.realism)},'
        f'"seed":{env.seed},'
        f'"skybox":{_s(env.skybox)},'
        f'"terrain_kind":{_s(env.terrain_kind)},'
        f'"terrain_layer":{_s(env.terrain_layer)},'
        f'"water":{"true" if env.water else "false"}'
        "}"
    )


def canonical_scene_text(scene: SceneGraph) -> str:
    objects = ",".join(
        f"{_s(oid)}:{_object(scene.objects[oid])}" for oid in sorted(scene.objects)
    )
    return (
        "{"
        f'"environment":{_environment(scene.environment)},'
        f'"objects":{{{objects}}},'
        f'"revision":{scene.revision}'
        "}"
    )


def scene_hash(scene: SceneGraph) -> str:
    return hashlib.sha256(canonical_scene_text(scene).encode("utf-8")).hexdigest()


def object_doc(o: SceneObject) -> dict:
    """JSON-shaped full-precision document for one object.

    Same key layout as the canonical text but without decimal fixing;
    used for wire payloads where values must survive a JSON round trip
    bit-exactly.
    """
    return {
        "asset_uid": o.asset_uid,
        "behaviors": [
            {
                "behavior_id": b.behavior_id,
                "kind": b.kind,
                "parameters": dict(b.parameters),
                "target": b.target_object_id,
            }
            for b in o.behaviors
        ],
        "extents": list(o.extents.as_tuple()),
        "name": o.name,
        "owner": o.owner,
        "placement": {
            "position": list(o.placement.position.as_tuple()),
            "scale": o.placement.scale,
            "yaw_deg": o.placement.yaw_deg,
        },
        "properties": dict(o.properties),
        "state": o.state.value,
    }


def object_from_doc(oid: str, od: dict) -> SceneObject:
    """Inverse of :func:`object_doc`."""
    behaviors = tuple(
        BehaviorDescriptor(
            behavior_id=bd["behavior_id"],
            kind=bd["kind"],
            parameters=dict(bd["parameters"]),
            target_object_id=bd["target"],
        )
        for bd in od.get("behaviors", ())
    )
    return SceneObject(
        id=oid,
        name=od["name"],
        extents=Extents(*od["extents"]),
        placement=Placement(
            position=Vec3(*od["placement"]["position"]),
            yaw_deg=od["placement"]["yaw_deg"],
            scale=od["placement"].get("scale", 1.0),
        ),
        state=PlaceholderState(od.get("state", "Proposed")),
        owner=od.get("owner", ""),
        asset_uid=od.get("asset_uid"),
        behaviors=behaviors,
        properties=dict(od.get("properties", {})),
    )


def parse_canonical_scene(text: str) -> SceneGraph:
    """Rebuild a SceneGraph from its canonical form (inverse of the emitter)."""
    from scenesmith.environment.types import ElevationRef, EnvironmentSpec, NoiseParams

    doc = json.loads(text)
    scene = SceneGraph()
    for oid in sorted(doc["objects"]):
        scene.objects[oid] = object_from_doc(oid, doc["objects"][oid])
    ed = doc["environment"]
    if ed is not None:
        scene.environment = EnvironmentSpec(
            terrain_kind=ed["terrain_kind"],
            realism=ed["realism"],
            noise=None if ed["noise"] is None else NoiseParams(**ed["noise"]),
            elevation_ref=(
                None if ed["elevation_ref"] is None else ElevationRef(**ed["elevation_ref"])
            ),
            material=ed["material"],
            terrain_layer=ed["terrain_layer"],
            skybox=ed["skybox"],
            water=ed["water"],
            seed=ed["seed"],
            fallbacks=tuple(ed["fallbacks"]),
        )
    scene.revision = doc["revision"]
    return scene
