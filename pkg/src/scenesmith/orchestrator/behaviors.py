"""Attaching interactive behaviors to scene objects."""

from __future__ import annotations

import dataclasses
import itertools
import threading

from ..core.scene import BehaviorDescriptor, SceneGraph
from ..errors import TargetNotFound


class BehaviorIdAllocator:
    """Process-unique, monotonically increasing behavior ids."""

    def __init__(self, prefix: str = "bhv"):
        self._prefix = prefix
        self._counter = itertools.count(1)
        self._lock = threading.Lock()

    def next_id(self) -> str:
        with self._lock:
            return f"{self._prefix}-{next(self._counter)}"


def find_target_id(scene: SceneGraph, target_name: str) -> str:
    """Resolve a behavior's target phrase to an object id.

    Exact name match wins; otherwise a unique substring match either way
    ("mug" finds "coffee mug"). Ambiguity resolves to the lowest id so
    repeated prompts stay deterministic.
    """
    wanted = target_name.strip().lower()
    if not wanted:
        raise TargetNotFound("behavior names no target object")
    by_id = sorted(scene.objects.values(), key=lambda o: o.id)
    for obj in by_id:
        if obj.name.lower() == wanted:
            return obj.id
    for obj in by_id:
        name = obj.name.lower()
        if wanted in name or name in wanted:
            return obj.id
    raise TargetNotFound(f"no scene object matches {target_name!r}")


def attach_behavior(
    scene: SceneGraph,
    target_id: str,
    kind: str,
    parameters: dict,
    behavior_id: str,
) -> BehaviorDescriptor:
    """Validate and attach one behavior; bumps the scene revision."""
    obj = scene.objects.get(target_id)
    if obj is None:
        raise TargetNotFound(f"no scene object with id {target_id!r}")
    descriptor = BehaviorDescriptor(
        behavior_id=behavior_id,
        kind=kind,
        parameters=dict(parameters),
        target_object_id=target_id,
    )
    scene.replace_object(
        dataclasses.replace(obj, behaviors=obj.behaviors + (descriptor,))
    )
    return descriptor
