"""Environment generation: preset selection, heightmaps, elevation."""

from scenesmith.environment.elevation import (
    HttpElevationProvider,
    SyntheticElevationProvider,
    heightmap_from_elevation,
)
from scenesmith.environment.heightmap import Heightmap
from scenesmith.environment.noise import generate_heightmap
from scenesmith.environment.presets import (
    PresetRegistry,
    Registries,
    TerrainRegistry,
    default_registries,
    load_registries,
)
from scenesmith.environment.select import (
    COMPONENTS,
    ComponentOutcome,
    EnvironmentSelection,
    prompt_seed,
    select_environment,
)
from scenesmith.environment.types import ElevationRef, EnvironmentSpec, NoiseParams

__all__ = [
    "COMPONENTS",
    "ComponentOutcome",
    "ElevationRef",
    "EnvironmentSelection",
    "EnvironmentSpec",
    "Heightmap",
    "HttpElevationProvider",
    "NoiseParams",
    "PresetRegistry",
    "Registries",
    "SyntheticElevationProvider",
    "TerrainRegistry",
    "default_registries",
    "generate_heightmap",
    "heightmap_from_elevation",
    "load_registries",
    "prompt_seed",
    "select_environment",
]
