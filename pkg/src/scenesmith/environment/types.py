"""Value types describing a generated environment.

These are deliberately plain: everything here ends up in the canonical scene
document, so fields are scalars/tuples only. Name fields (terrain_kind,
material, terrain_layer, skybox) are validated against the preset registries
by select_environment, not here, so the registries stay data-driven.
"""

from __future__ import annotations

from dataclasses import dataclass, field

REALISM_MODES = ("low_poly", "realistic")


@dataclass(frozen=True)
class NoiseParams:
    """Parameters for the seeded gradient-noise heightfield."""

    amplitude: float = 1.0
    frequency: float = 0.05
    octaves: int = 4
    persistence: float = 0.5

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.frequency <= 0:
            raise ValueError("frequency must be > 0")
        if self.octaves < 1:
            raise ValueError("octaves must be >= 1")
        if not 0 < self.persistence <= 1:
            raise ValueError("persistence must be in (0, 1]")


@dataclass(frozen=True)
class ElevationRef:
    """A real-world patch used to source a heightfield (realistic terrain)."""

    lat: float
    lon: float
    extent_m: float = 1000.0

    def __post_init__(self):
        if not -90 <= self.lat <= 90:
            raise ValueError("lat out of range")
        if not -180 <= self.lon <= 180:
            raise ValueError("lon out of range")
        if self.extent_m <= 0:
            raise ValueError("extent_m must be > 0")


@dataclass
class EnvironmentSpec:
    """Complete description of the backdrop for a scene.

    Exactly one height source is populated: noise for low_poly realism,
    elevation_ref for realistic. ``fallbacks`` records which selection
    components fell back to their registered default so clients can surface
    degraded results.
    """

    terrain_kind: str = "meadow"
    realism: str = "low_poly"
    noise: NoiseParams | None = None
    elevation_ref: ElevationRef | None = None
    material: str = "grass"
    terrain_layer: str = "Grass_TerrainLayer"
    skybox: str = "daytime_bright_skybox"
    water: bool = False
    seed: int = 0
    fallbacks: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.realism not in REALISM_MODES:
            raise ValueError(f"unknown realism mode {self.realism!r}")
        if self.realism == "low_poly":
            if self.elevation_ref is not None:
                raise ValueError("low_poly environments carry noise, not elevation_ref")
            if self.noise is None:
                object.__setattr__(self, "noise", NoiseParams())
        else:
            if self.elevation_ref is None:
                raise ValueError("realistic environments require an elevation_ref")
            if self.noise is not None:
                raise ValueError("realistic environments carry elevation_ref, not noise")
