"""Geometric value types and the unit-fit scaling rules.

Axis convention throughout the engine: x runs left/right, y runs
front/behind, z is vertical (below/above). All lengths are scene meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scenesmith.errors import InvalidExtents

VALID_YAWS = (0, 90, 180, 270)


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidExtents(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        _require_finite("Vec3 component", self.x, self.y, self.z)

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, c: float) -> "Vec3":
        return Vec3(self.x * c, self.y * c, self.z * c)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Extents:
    """Axis-aligned bounding-box sizes; strictly positive in every axis."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        _require_finite("extent", self.x, self.y, self.z)
        if self.x <= 0 or self.y <= 0 or self.z <= 0:
            raise InvalidExtents(f"extents must be strictly positive, got {self.as_tuple()}")

    def max_component(self) -> float:
        return max(self.x, self.y, self.z)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Placement:
    """Position plus a cardinal yaw and a uniform scale."""

    position: Vec3
    yaw_deg: int = 0
    scale: float = 1.0

    def __post_init__(self):
        if self.yaw_deg not in VALID_YAWS:
            raise ValueError(f"yaw_deg must be one of {VALID_YAWS}, got {self.yaw_deg}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be positive and finite, got {self.scale}")


def fit_to_unit(extents: Extents) -> float:
    """Uniform scale that shrinks/grows a box to fit a 1x1x1 cell.

    The largest axis lands exactly on 1; aspect ratio is preserved.
    """
    if not isinstance(extents, Extents):
        extents = Extents(*extents)
    return 1.0 / extents.max_component()


def rescale_to_suggested(unit_extents: Extents, suggested: Extents) -> float:
    """Uniform scale taking a unit-fitted box up to the largest suggested extent.

    Per-axis squish is deliberately not supported; assets keep their
    proportions and only their overall size follows the suggestion.
    """
    if not isinstance(unit_extents, Extents):
        unit_extents = Extents(*unit_extents)
    if not isinstance(suggested, Extents):
        suggested = Extents(*suggested)
    if abs(unit_extents.max_component() - 1.0) > 1e-9:
        raise InvalidExtents(
            f"unit_extents must have max component 1, got {unit_extents.as_tuple()}"
        )
    return suggested.max_component()
