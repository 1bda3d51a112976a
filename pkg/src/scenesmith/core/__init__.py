"""Core scene model: geometry, lifecycle, relations, the scene graph and its
canonical serialized form."""

from scenesmith.core.canonical import (
    canonical_scene_text,
    object_doc,
    object_from_doc,
    parse_canonical_scene,
    scene_hash,
)
from scenesmith.core.geometry import (
    VALID_YAWS,
    Extents,
    Placement,
    Vec3,
    fit_to_unit,
    rescale_to_suggested,
)
from scenesmith.core.lifecycle import PlaceholderState, check_transition
from scenesmith.core.relations import SpatialRelation, SpatialRelationKind
from scenesmith.core.scene import (
    BEHAVIOR_KINDS,
    BehaviorDescriptor,
    ObjectIdAllocator,
    SceneGraph,
    SceneObject,
)

__all__ = [
    "BEHAVIOR_KINDS",
    "BehaviorDescriptor",
    "Extents",
    "ObjectIdAllocator",
    "Placement",
    "PlaceholderState",
    "SceneGraph",
    "SceneObject",
    "SpatialRelation",
    "SpatialRelationKind",
    "VALID_YAWS",
    "Vec3",
    "canonical_scene_text",
    "object_doc",
    "object_from_doc",
    "check_transition",
    "fit_to_unit",
    "parse_canonical_scene",
    "rescale_to_suggested",
    "scene_hash",
]
