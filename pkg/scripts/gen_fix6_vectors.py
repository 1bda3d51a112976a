#!/usr/bin/env python3
"""Generate cross-language test vectors for the web client.

The TypeScript client mirrors three byte-sensitive pieces of the engine:
the fixed-6-decimal float formatting, canonical scene serialization with
its SHA-256 hash, and the length-prefixed wire framing. This script dumps
reference vectors the frontend test suite replays verbatim, plus a copy
of the golden session transcript for the reducer port.

Outputs land in frontend/test-vectors/.
"""

from __future__ import annotations

import json
import random
import shutil
import struct
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from scenesmith.core.canonical import canonical_scene_text, scene_hash  # noqa: E402
from scenesmith.core.geometry import Extents, Placement, Vec3  # noqa: E402
from scenesmith.core.lifecycle import PlaceholderState  # noqa: E402
from scenesmith.core.scene import BehaviorDescriptor, SceneGraph, SceneObject  # noqa: E402
from scenesmith.environment.types import ElevationRef, EnvironmentSpec, NoiseParams  # noqa: E402
from scenesmith.sync.wire import MessageType, WireMessage, encode_frame  # noqa: E402

OUT_DIR = Path(__file__).resolve().parent.parent / "frontend" / "test-vectors"
GOLDEN = (
    Path(__file__).resolve().parent.parent
    / "src" / "scenesmith" / "data" / "golden_session.jsonl"
)


def _bits(x: float) -> str:
    return struct.pack(">d", x).hex()


def gen_fix6() -> list[dict]:
    hand_picked = [
        0.0, -0.0, 1.0, -1.0, 0.5, -0.5, 8.0, -8.0,
        0.1, 0.2, 0.1 + 0.2, 1.0 / 3.0, 2.0 / 3.0,
        1e-7, -1e-7, 4.9e-7, 5.1e-7,
        0.0000005, 0.0000015, 0.0000025, -0.0000005, -0.0000015,
        1.0000005, 2.0000005, 1.0000015, 7.0000004999,
        2.5e-6, 3.5e-6, 9.9999995, -9.9999995,
        3.141592653589793, 2.718281828459045,
        123456.789012345, -123456.789012345,
        1e15, -1e15, 1e15 + 0.5,
        5e-324, 1.7976931348623157e308 * 0,  # subnormal, and exact zero again
    ]
    rng = random.Random(20240842)
    sampled = [rng.uniform(-16.0, 16.0) for _ in range(120)]
    sampled += [rng.randint(-20_000_000, 20_000_000) / 1e6 for _ in range(120)]
    sampled += [k * 5e-7 for k in range(-10, 11)]
    values = hand_picked + sampled
    return [
        {"bits": _bits(v), "value": v, "text": format(float(v), ".6f")}
        for v in values
    ]


def _scene_empty() -> SceneGraph:
    return SceneGraph()


def _scene_full() -> SceneGraph:
    scene = SceneGraph()
    scene.add_object(
        SceneObject(
            id="obj-1",
            name="café table",
            extents=Extents(1.5, 0.75, 1.1),
            placement=Placement(position=Vec3(0.1 + 0.2, -0.0, 2.0000005), yaw_deg=270, scale=0.5),
            state=PlaceholderState.FINALIZED,
            owner="alice",
            asset_uid="toy/table",
            behaviors=(
                BehaviorDescriptor(
                    behavior_id="bhv-1",
                    kind="spawner_tool",
                    parameters={"spawned_shape": "cube", "rate": 2.5, "enabled": True},
                    target_object_id="obj-1",
                ),
            ),
            properties={"label": "café ☕", "weight": 1.0 / 3.0, "tagged": False},
        )
    )
    scene.add_object(
        SceneObject(
            id="obj-2",
            name="lamp",
            extents=Extents(1.0, 1.0, 2.0),
            placement=Placement(position=Vec3(-3.0, 4.0, 0.0)),
            state=PlaceholderState.PROPOSED,
            owner=None,
        )
    )
    scene.set_environment(
        EnvironmentSpec(
            terrain_kind="dunes",
            realism="low_poly",
            noise=NoiseParams(amplitude=2.0, frequency=0.05, octaves=4, persistence=0.5),
            material="sand",
            terrain_layer="Sand_TerrainLayer",
            skybox="sunset_skybox",
            water=True,
            fallbacks=("material",),
        )
    )
    return scene


def _scene_realistic() -> SceneGraph:
    scene = SceneGraph()
    scene.add_object(
        SceneObject(
            id="a",
            name="marker",
            extents=Extents(1, 1, 1),
            placement=Placement(position=Vec3(7.0000004999, -0.0000005, 0.0000015)),
        )
    )
    scene.set_environment(
        EnvironmentSpec(
            terrain_kind="alpine",
            realism="realistic",
            elevation_ref=ElevationRef(lat=46.55, lon=8.56, extent_m=2000.0),
            material="rock",
            terrain_layer="Rock_TerrainLayer",
            skybox="overcast_skybox",
            water=False,
        )
    )
    return scene


def gen_scenes() -> list[dict]:
    out = []
    for label, scene in (
        ("empty", _scene_empty()),
        ("full", _scene_full()),
        ("realistic", _scene_realistic()),
    ):
        text = canonical_scene_text(scene)
        out.append({"label": label, "canonical": text, "hash": scene_hash(scene)})
    return out


def gen_frames() -> list[dict]:
    messages = [
        WireMessage(
            type=MessageType.JOIN,
            sender="browser-1",
            session="session-1",
            client_seq=0,
            payload={},
        ),
        WireMessage(
            type=MessageType.SPAWN_PLACEHOLDER,
            sender="browser-1",
            session="session-1",
            client_seq=1,
            payload={
                "object_id": "browser-1-obj-1",
                "object": {
                    "asset_uid": None,
                    "behaviors": [],
                    "extents": [1.0, 1.0, 1.0],
                    "name": "crate",
                    "owner": "browser-1",
                    "placement": {"position": [0.3, -2.0, 0.0], "scale": 1.0, "yaw_deg": 0},
                    "properties": {},
                    "state": "Proposed",
                },
            },
        ),
        WireMessage(
            type=MessageType.ACK,
            sender="server",
            session="session-1",
            client_seq=1,
            server_seq=4,
            payload={"client_seq": 1, "of": "SpawnPlaceholder"},
        ),
    ]
    return [
        {"json": m.to_json(), "frame_hex": encode_frame(m).hex()} for m in messages
    ]


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    vectors = {
        "fix6.json": gen_fix6(),
        "scenes.json": gen_scenes(),
        "frames.json": gen_frames(),
    }
    for name, data in vectors.items():
        path = OUT_DIR / name
        path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(data)} vectors)")
    shutil.copyfile(GOLDEN, OUT_DIR / "golden_session.jsonl")
    print(f"copied golden session transcript ({GOLDEN.name})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
