"""Scripted responses for tests and fixture authoring.

A ScriptedProvider plays a canned sequence per template id, exactly like a
fixture replay would, and therefore registers under the "fixture" provider
name by default. Sequences can be literal response texts or callables of
the request (for scripts that must read the rendered prompt, e.g. the
one-fix-per-round layout critic).
"""

from __future__ import annotations

import json
import threading
from collections import deque
from collections.abc import Callable, Iterable

from scenesmith.errors import ProviderUnavailable
from scenesmith.reasoner.requests import ReasonerRequest

Responder = "str | dict | Callable[[ReasonerRequest], str | dict]"


def _to_text(item, request: ReasonerRequest) -> str:
    if callable(item):
        item = item(request)
    if isinstance(item, str):
        return item
    return json.dumps(item)


class ScriptedProvider:
    def __init__(
        self,
        script: dict[str, Iterable] | None = None,
        default: Callable[[ReasonerRequest], "str | dict"] | None = None,
        name: str = "fixture",
        repeat_last: bool = False,
    ):
        self.name = name
        self._queues = {tid: deque(items) for tid, items in (script or {}).items()}
        self._default = default
        self._repeat_last = repeat_last
        self._lock = threading.Lock()
        self.calls: list[str] = []

    def extend(self, template_id: str, items: Iterable) -> None:
        with self._lock:
            self._queues.setdefault(template_id, deque()).extend(items)

    def complete(self, request: ReasonerRequest) -> str:
        with self._lock:
            self.calls.append(request.template_id)
            queue = self._queues.get(request.template_id)
            if queue:
                item = queue.popleft()
                if self._repeat_last and not queue:
                    queue.append(item)
                return _to_text(item, request)
        if self._default is not None:
            return _to_text(self._default, request)
        raise ProviderUnavailable(f"script exhausted for {request.template_id}")
