"""Sketch-to-asset resolution.

A hand-drawn sketch is first condensed to a short text tag by the
reasoner, then that tag runs through the ordinary caption search. The
sketch never needs to resemble the asset pixel-for-pixel — only the tag
has to land near the right caption.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import AllProvidersFailed, SchemaViolation, TagUnavailable
from ..reasoner import ReasonerGateway, build_request
from .index import CatalogIndex, SearchHit


@dataclass(frozen=True)
class SketchMatch:
    tag: str
    hit: SearchHit
    alternatives: tuple[str, ...] = ()


def tag_sketch(image_png: bytes, gateway: ReasonerGateway, hint: str = "") -> tuple[str, tuple[str, ...]]:
    """Ask the reasoner what the sketch depicts; short noun-phrase tag."""
    request = build_request("sketch_tag", {"hint": hint or "none"}, images=(image_png,))
    try:
        response = gateway.invoke(request)
    except (AllProvidersFailed, SchemaViolation) as exc:
        raise TagUnavailable("no provider could tag the sketch") from exc
    tag = response.parsed["tag"].strip()
    if not tag:
        raise TagUnavailable("provider returned an empty sketch tag")
    alternatives = tuple(response.parsed.get("alternatives", ()))
    return tag, alternatives


def sketch_to_asset(
    image_png: bytes,
    gateway: ReasonerGateway,
    index: CatalogIndex,
    hint: str = "",
) -> SketchMatch:
    """Resolve a sketch image to the best-matching catalog asset."""
    tag, alternatives = tag_sketch(image_png, gateway, hint)
    hits = index.search(tag, k=1)
    return SketchMatch(tag=tag, hit=hits[0], alternatives=alternatives)
