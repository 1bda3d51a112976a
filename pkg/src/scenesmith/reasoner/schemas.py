"""Structured-output schemas, one per template id."""

from __future__ import annotations

import jsonschema

from scenesmith.core.scene import BEHAVIOR_KINDS
from scenesmith.errors import SchemaViolation

_POSITION = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 3,
    "maxItems": 3,
}
_EXTENTS = {
    "type": "array",
    "items": {"type": "number", "exclusiveMinimum": 0},
    "minItems": 3,
    "maxItems": 3,
}
_LAYOUT_ENTRY = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "position"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "position": _POSITION,
        "extents": _EXTENTS,
        "yaw_deg": {"enum": [0, 90, 180, 270]},
    },
}

SCHEMAS: dict[str, dict] = {
    "decider": {
        "type": "object",
        "additionalProperties": False,
        "required": ["mode"],
        "properties": {
            "mode": {"enum": ["static_scene", "interactive"]},
            "rationale": {"type": "string"},
            "behavior": {
                "type": "object",
                "additionalProperties": False,
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": list(BEHAVIOR_KINDS)},
                    "target": {"type": "string"},
                    "parameters": {"type": "object"},
                },
            },
        },
    },
    "asset_proposal": {
        "type": "object",
        "additionalProperties": False,
        "required": ["objects"],
        "properties": {
            "objects": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["name", "query"],
                    "properties": {
                        "name": {"type": "string", "minLength": 1},
                        "query": {"type": "string", "minLength": 1},
                        "suggested_extents": _EXTENTS,
                        "count": {"type": "integer", "minimum": 1},
                    },
                },
            }
        },
    },
    "layout_initial": {
        "type": "object",
        "additionalProperties": False,
        "required": ["objects"],
        "properties": {
            "objects": {"type": "array", "minItems": 1, "items": _LAYOUT_ENTRY}
        },
    },
    "layout_update": {
        "type": "object",
        "additionalProperties": False,
        "required": ["done"],
        "properties": {
            "done": {"type": "boolean"},
            "objects": {"type": "array", "items": _LAYOUT_ENTRY},
        },
    },
    "orientation": {
        "type": "object",
        "additionalProperties": False,
        "required": ["facing"],
        "properties": {
            "facing": {"enum": ["PlusX", "MinusX", "PlusY", "MinusY", "Unknown"]}
        },
    },
    "terrain_lowpoly": {
        "type": "object",
        "additionalProperties": False,
        "required": ["terrain_kind"],
        "properties": {"terrain_kind": {"type": "string", "minLength": 1}},
    },
    "terrain_realistic": {
        "type": "object",
        "additionalProperties": False,
        "required": ["match"],
        "properties": {
            "match": {"type": "boolean"},
            "place": {"type": "string"},
            "lat": {"type": "number", "minimum": -90, "maximum": 90},
            "lon": {"type": "number", "minimum": -180, "maximum": 180},
            "extent_m": {"type": "number", "exclusiveMinimum": 0},
        },
        "if": {"properties": {"match": {"const": True}}},
        "then": {"required": ["match", "lat", "lon"]},
    },
    "material": {
        "type": "object",
        "additionalProperties": False,
        "required": ["material"],
        "properties": {"material": {"type": "string", "minLength": 1}},
    },
    "terrain_layer": {
        "type": "object",
        "additionalProperties": False,
        "required": ["terrain_layer"],
        "properties": {"terrain_layer": {"type": "string", "minLength": 1}},
    },
    "skybox": {
        "type": "object",
        "additionalProperties": False,
        "required": ["skybox"],
        "properties": {"skybox": {"type": "string", "minLength": 1}},
    },
    "water": {
        "type": "object",
        "additionalProperties": False,
        "required": ["water"],
        "properties": {
            "water": {"type": "boolean"},
            "level": {"type": "number", "minimum": 0},
        },
    },
    "sketch_tag": {
        "type": "object",
        "additionalProperties": False,
        "required": ["tag"],
        "properties": {
            "tag": {"type": "string", "minLength": 1},
            "alternatives": {"type": "array", "items": {"type": "string"}},
        },
    },
    "scene_gen": {
        "type": "object",
        "additionalProperties": False,
        "required": ["description"],
        "properties": {"description": {"type": "string", "minLength": 1}},
    },
    "graph_extract": {
        "type": "object",
        "additionalProperties": False,
        "required": ["relations"],
        "properties": {
            "relations": {
                "type": "array",
                "items": {
                    "type": "array",
                    "items": [
                        {"type": "string", "minLength": 1},
                        {"enum": ["Left", "Right", "Front", "Behind", "Below", "Above"]},
                        {"type": "string", "minLength": 1},
                    ],
                    "minItems": 3,
                    "maxItems": 3,
                },
            }
        },
    },
}

_VALIDATORS = {
    tid: jsonschema.Draft7Validator(schema) for tid, schema in SCHEMAS.items()
}


def validate_payload(template_id: str, payload) -> None:
    validator = _VALIDATORS.get(template_id)
    if validator is None:
        raise SchemaViolation(f"no schema registered for template {template_id!r}")
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise SchemaViolation(f"{template_id}: {first.message} at {where}")
