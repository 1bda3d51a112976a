"""HTTP provider speaking the common chat-completions dialect."""

from __future__ import annotations

import base64
import os
from dataclasses import dataclass, field

import requests as http

from scenesmith.errors import ProviderTransientError, ProviderUnavailable
from scenesmith.reasoner.requests import ReasonerRequest


@dataclass
class RemoteConfig:
    base_url: str = ""
    api_key: str = ""
    model: str = "gpt-4o"
    # per-template overrides, e.g. {"decider": "gpt-4o-mini"} for fast routing
    model_by_template: dict[str, str] = field(default_factory=dict)
    timeout_s: float = 60.0

    @classmethod
    def from_env(cls, base: "RemoteConfig | None" = None) -> "RemoteConfig":
        cfg = base or cls()
        cfg.base_url = os.environ.get("SCENESMITH_REMOTE_URL", cfg.base_url)
        cfg.api_key = os.environ.get("SCENESMITH_REMOTE_KEY", cfg.api_key)
        cfg.model = os.environ.get("SCENESMITH_REMOTE_MODEL", cfg.model)
        return cfg


class RemoteProvider:
    name = "remote"

    def __init__(self, config: RemoteConfig, session: "http.Session | None" = None):
        if not config.base_url:
            raise ValueError("remote provider requires a base_url")
        self.config = config
        self._session = session or http.Session()

    def _content(self, request: ReasonerRequest):
        if not request.images:
            return request.rendered_prompt
        parts = [{"type": "text", "text": request.rendered_prompt}]
        for img in request.images:
            b64 = base64.b64encode(img).decode("ascii")
            parts.append(
                {
                    "type": "image_url",
                    "image_url": {"url": f"data:image/png;base64,{b64}"},
                }
            )
        return parts

    def complete(self, request: ReasonerRequest) -> str:
        model = self.config.model_by_template.get(request.template_id, self.config.model)
        body = {
            "model": model,
            "messages": [{"role": "user", "content": self._content(request)}],
            "response_format": {"type": "json_object"},
            "temperature": 0,
        }
        headers = {}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        try:
            resp = self._session.post(
                url, json=body, headers=headers, timeout=self.config.timeout_s
            )
        except http.RequestException as e:
            raise ProviderTransientError(f"remote request failed: {e}") from e
        if resp.status_code in (429, 500, 502, 503, 504):
            raise ProviderTransientError(f"remote returned {resp.status_code}")
        if resp.status_code != 200:
            raise ProviderUnavailable(f"remote returned {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise ProviderTransientError(f"malformed remote response: {e}") from e
