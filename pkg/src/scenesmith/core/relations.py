"""Directed qualitative spatial relations between pairs of scene objects."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class SpatialRelationKind(Enum):
    LEFT = "Left"
    RIGHT = "Right"
    FRONT = "Front"
    BEHIND = "Behind"
    BELOW = "Below"
    ABOVE = "Above"

    @property
    def inverse(self) -> "SpatialRelationKind":
        return _INVERSE[self]

    @property
    def axis(self) -> str:
        """Coordinate axis the relation constrains: x, y or z."""
        return _AXIS[self]

    @property
    def source_is_lesser(self) -> bool:
        """True when the relation requires coord(source) < coord(target)."""
        return self in (
            SpatialRelationKind.LEFT,
            SpatialRelationKind.FRONT,
            SpatialRelationKind.BELOW,
        )


_INVERSE = {
    SpatialRelationKind.LEFT: SpatialRelationKind.RIGHT,
    SpatialRelationKind.RIGHT: SpatialRelationKind.LEFT,
    SpatialRelationKind.FRONT: SpatialRelationKind.BEHIND,
    SpatialRelationKind.BEHIND: SpatialRelationKind.FRONT,
    SpatialRelationKind.BELOW: SpatialRelationKind.ABOVE,
    SpatialRelationKind.ABOVE: SpatialRelationKind.BELOW,
}

_AXIS = {
    SpatialRelationKind.LEFT: "x",
    SpatialRelationKind.RIGHT: "x",
    SpatialRelationKind.FRONT: "y",
    SpatialRelationKind.BEHIND: "y",
    SpatialRelationKind.BELOW: "z",
    SpatialRelationKind.ABOVE: "z",
}


@dataclass(frozen=True)
class SpatialRelation:
    source: str
    kind: SpatialRelationKind
    target: str

    def __post_init__(self):
        if self.source == self.target:
            raise ValueError(f"relation endpoints must differ, got {self.source!r} twice")

    def as_triple(self) -> tuple[str, str, str]:
        return (self.source, self.kind.value, self.target)

    @classmethod
    def from_triple(cls, triple) -> "SpatialRelation":
        source, kind, target = triple
        return cls(source, SpatialRelationKind(kind), target)
