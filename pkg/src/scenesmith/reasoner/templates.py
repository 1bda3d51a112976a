"""Versioned request templates and their rendering.

Templates are plain text files shipped under data/templates as
``<template_id>.<version>.txt`` with ``{{variable}}`` placeholders. Rendering
is strict both ways: unknown template ids and unresolved placeholders fail
loudly, and extra variables are rejected so call sites stay honest.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from pathlib import Path

from scenesmith.reasoner.requests import TEMPLATE_IDS

TEMPLATE_VERSION = "v1"
_PLACEHOLDER = re.compile(r"\{\{(\w+)\}\}")


def default_template_root() -> Path:
    return Path(__file__).resolve().parent.parent / "data" / "templates"


class TemplateLibrary:
    def __init__(self, root: str | Path | None = None, version: str = TEMPLATE_VERSION):
        self.root = Path(root) if root else default_template_root()
        self.version = version
        self._cache: dict[str, str] = {}

    def source(self, template_id: str) -> str:
        if template_id not in TEMPLATE_IDS:
            raise KeyError(f"unknown template id {template_id!r}")
        if template_id not in self._cache:
            path = self.root / f"{template_id}.{self.version}.txt"
            self._cache[template_id] = path.read_text(encoding="utf-8")
        return self._cache[template_id]

    def variables(self, template_id: str) -> tuple[str, ...]:
        seen = dict.fromkeys(_PLACEHOLDER.findall(self.source(template_id)))
        return tuple(seen)

    def render(self, template_id: str, variables: Mapping[str, object]) -> str:
        source = self.source(template_id)
        wanted = set(_PLACEHOLDER.findall(source))
        missing = wanted - set(variables)
        if missing:
            raise KeyError(f"{template_id} missing variables: {sorted(missing)}")
        extra = set(variables) - wanted
        if extra:
            raise KeyError(f"{template_id} got unexpected variables: {sorted(extra)}")
        return _PLACEHOLDER.sub(lambda m: str(variables[m.group(1)]), source)


_default_library: TemplateLibrary | None = None


def default_library() -> TemplateLibrary:
    global _default_library
    if _default_library is None:
        _default_library = TemplateLibrary()
    return _default_library


def input_block(rendered_prompt: str) -> str:
    """The caller-supplied part of a rendered prompt.

    Every template ends with a marked input section; deterministic providers
    parse only that section so few-shot examples never leak into matching.
    """
    head, sep, tail = rendered_prompt.rpartition("### INPUT")
    if not sep:
        return rendered_prompt
    body, _, _ = tail.partition("### OUTPUT")
    return body.strip()
