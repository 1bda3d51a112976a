"""The authoritative scene graph and its object records.

SceneGraph is a plain mutable container with a strict revision discipline:
every mutation bumps the revision by exactly one and object ids are never
reused within a session. It carries no locks of its own; owning modules
serialize access.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from scenesmith.core.geometry import Extents, Placement, Vec3
from scenesmith.core.lifecycle import PlaceholderState, check_transition

BEHAVIOR_KINDS = ("grabbable", "spawner_tool", "draw_tool", "custom")

# Parameters a descriptor must carry per kind; everything else is free-form.
REQUIRED_BEHAVIOR_PARAMS = {
    "grabbable": (),
    "spawner_tool": ("spawned_shape",),
    "draw_tool": (),
    "custom": ("description",),
}


@dataclass(frozen=True)
class BehaviorDescriptor:
    """Structured stand-in for a scripted interactive behavior."""

    behavior_id: str
    kind: str
    parameters: dict
    target_object_id: str

    def __post_init__(self):
        if self.kind not in BEHAVIOR_KINDS:
            raise ValueError(f"unknown behavior kind {self.kind!r}")
        missing = [p for p in REQUIRED_BEHAVIOR_PARAMS[self.kind] if p not in self.parameters]
        if missing:
            raise ValueError(f"{self.kind} behavior missing required parameters: {missing}")
        for key, value in self.parameters.items():
            if not isinstance(value, (str, int, float, bool, type(None))):
                raise ValueError(f"behavior parameter {key!r} must be a scalar, got {type(value)}")


@dataclass(frozen=True)
class SceneObject:
    id: str
    name: str
    extents: Extents
    placement: Placement
    state: PlaceholderState = PlaceholderState.PROPOSED
    owner: str | None = None
    asset_uid: str | None = None
    behaviors: tuple[BehaviorDescriptor, ...] = ()
    properties: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.asset_uid is not None and self.state.order < PlaceholderState.FIRST_PASS.order:
            raise ValueError("asset_uid requires state FirstPass or later")


def advance_state(obj: SceneObject, nxt: PlaceholderState) -> SceneObject:
    """Return a copy of obj advanced to the immediate successor state."""
    check_transition(obj.state, nxt)
    return replace(obj, state=nxt)


class ObjectIdAllocator:
    """Prefix + counter ids, unique for the allocator's lifetime."""

    def __init__(self, prefix: str = "obj"):
        self._prefix = prefix
        self._counter = itertools.count(1)

    def next_id(self) -> str:
        return f"{self._prefix}-{next(self._counter)}"


class SceneGraph:
    """Objects + optional environment + a strictly monotone revision counter."""

    def __init__(self):
        self.objects: dict[str, SceneObject] = {}
        self.environment = None  # EnvironmentSpec, owned by scenesmith.environment
        self.revision = 0
        self._retired_ids: set[str] = set()

    def _bump(self):
        self.revision += 1

    def add_object(self, obj: SceneObject) -> None:
        if obj.id in self.objects or obj.id in self._retired_ids:
            raise ValueError(f"object id {obj.id!r} already used in this session")
        self.objects[obj.id] = obj
        self._bump()

    def replace_object(self, obj: SceneObject) -> None:
        if obj.id not in self.objects:
            raise KeyError(obj.id)
        self.objects[obj.id] = obj
        self._bump()

    def remove_object(self, object_id: str) -> None:
        if object_id not in self.objects:
            raise KeyError(object_id)
        del self.objects[object_id]
        self._retired_ids.add(object_id)
        self._bump()

    def set_environment(self, environment) -> None:
        self.environment = environment
        self._bump()

    def advance_object(self, object_id: str, nxt: PlaceholderState) -> SceneObject:
        obj = advance_state(self.objects[object_id], nxt)
        self.replace_object(obj)
        return obj

    def positions(self) -> dict[str, Vec3]:
        return {o.id: o.placement.position for o in self.objects.values()}

    def objects_in_state(self, state: PlaceholderState) -> list[SceneObject]:
        return [o for o in self.objects.values() if o.state is state]
