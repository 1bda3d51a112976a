"""Preset registries: terrain kinds, materials, terrain layers, skyboxes.

Registries are data files so adding a skybox is an edit, not a rebuild.
Terrain kinds additionally map to the noise parameters that shape their
low-poly heightfield; the special kind "realworld" carries none because its
heights come from an elevation provider instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from scenesmith.environment.types import NoiseParams


def default_preset_root() -> Path:
    return Path(__file__).resolve().parent.parent / "data" / "presets"


@dataclass(frozen=True)
class PresetRegistry:
    name: str
    default: str
    options: tuple[str, ...]

    def __contains__(self, value: str) -> bool:
        return value in self.options

    def __post_init__(self):
        if self.default not in self.options:
            raise ValueError(f"{self.name}: default {self.default!r} not in options")


@dataclass(frozen=True)
class TerrainRegistry(PresetRegistry):
    noise: dict  # kind -> NoiseParams | None

    def noise_for(self, kind: str) -> NoiseParams | None:
        if kind not in self.options:
            raise KeyError(kind)
        return self.noise[kind]


@dataclass(frozen=True)
class Registries:
    terrain: TerrainRegistry
    materials: PresetRegistry
    terrain_layers: PresetRegistry
    skyboxes: PresetRegistry


def _load_simple(root: Path, filename: str, name: str) -> PresetRegistry:
    doc = json.loads((root / filename).read_text(encoding="utf-8"))
    return PresetRegistry(name=name, default=doc["default"], options=tuple(doc["options"]))


def load_registries(root: str | Path | None = None) -> Registries:
    root = Path(root) if root else default_preset_root()
    tdoc = json.loads((root / "terrain_kinds.json").read_text(encoding="utf-8"))
    noise = {
        kind: None if params is None else NoiseParams(**params)
        for kind, params in tdoc["options"].items()
    }
    terrain = TerrainRegistry(
        name="terrain_kinds",
        default=tdoc["default"],
        options=tuple(tdoc["options"]),
        noise=noise,
    )
    return Registries(
        terrain=terrain,
        materials=_load_simple(root, "materials.json", "materials"),
        terrain_layers=_load_simple(root, "terrain_layers.json", "terrain_layers"),
        skyboxes=_load_simple(root, "skyboxes.json", "skyboxes"),
    )


_default_registries: Registries | None = None


def default_registries() -> Registries:
    global _default_registries
    if _default_registries is None:
        _default_registries = load_registries()
    return _default_registries
