"""Recorded-response store: a directory of digest-named text documents."""

from __future__ import annotations

import os
import threading
from pathlib import Path

from scenesmith.errors import ProviderUnavailable
from scenesmith.reasoner.requests import ReasonerRequest, request_digest


class FixtureStore:
    """Response texts keyed by request digest; reads are lock-free."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._write_lock = threading.Lock()

    def _path(self, digest: str) -> Path:
        return self.root / f"{digest}.txt"

    def has(self, digest: str) -> bool:
        return self._path(digest).is_file()

    def lookup(self, digest: str) -> str | None:
        try:
            return self._path(digest).read_text(encoding="utf-8")
        except FileNotFoundError:
            return None

    def put(self, digest: str, text: str) -> Path:
        with self._write_lock:
            self.root.mkdir(parents=True, exist_ok=True)
            path = self._path(digest)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(text, encoding="utf-8")
            os.replace(tmp, path)
        return path

    def digests(self) -> list[str]:
        if not self.root.is_dir():
            return []
        return sorted(p.stem for p in self.root.glob("*.txt"))

    def __len__(self) -> int:
        return len(self.digests())


class FixtureProvider:
    """Replays recorded responses; declines anything unrecorded."""

    name = "fixture"

    def __init__(self, store: FixtureStore):
        self.store = store

    def complete(self, request: ReasonerRequest) -> str:
        digest = request_digest(request)
        text = self.store.lookup(digest)
        if text is None:
            raise ProviderUnavailable(
                f"no fixture for {request.template_id} digest {digest[:12]}"
            )
        return text
