"""Typed envelope for every language/vision call the engine makes."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

TEMPLATE_IDS = (
    "decider",
    "layout_initial",
    "layout_update",
    "orientation",
    "asset_proposal",
    "terrain_lowpoly",
    "terrain_realistic",
    "material",
    "terrain_layer",
    "skybox",
    "water",
    "sketch_tag",
    "scene_gen",
    "graph_extract",
)

# Every template in the closed set expects structured (JSON) output and is
# validated against the schema registered under its own id.
STRUCTURED_TEMPLATES = frozenset(TEMPLATE_IDS)

PROVIDER_NAMES = ("remote", "fixture", "heuristic")


@dataclass(frozen=True)
class ReasonerRequest:
    template_id: str
    rendered_prompt: str
    images: tuple[bytes, ...] = ()
    schema: str | None = None

    def __post_init__(self):
        if self.template_id not in TEMPLATE_IDS:
            raise ValueError(f"unknown template id {self.template_id!r}")
        structured = self.template_id in STRUCTURED_TEMPLATES
        if self.schema is None and structured:
            object.__setattr__(self, "schema", self.template_id)
        if (self.schema is not None) != structured:
            raise ValueError(
                f"schema must be present iff template is structured ({self.template_id})"
            )


@dataclass(frozen=True)
class ReasonerResponse:
    text: str
    parsed: object | None
    provider: str
    attempt: int

    def __post_init__(self):
        if self.provider not in PROVIDER_NAMES:
            raise ValueError(f"unknown provider {self.provider!r}")
        if self.attempt < 1:
            raise ValueError("attempt must be >= 1")


def request_digest(request: ReasonerRequest) -> str:
    """Stable identity of a request: template + rendered text + image digests."""
    h = hashlib.sha256()
    h.update(request.template_id.encode("utf-8"))
    h.update(b"\x00")
    h.update(request.rendered_prompt.encode("utf-8"))
    for img in request.images:
        h.update(b"\x00")
        h.update(hashlib.sha256(img).digest())
    return h.hexdigest()
