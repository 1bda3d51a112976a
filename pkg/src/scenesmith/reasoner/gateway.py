"""The single chokepoint for language/vision calls.

A gateway owns a set of named providers and tries them in policy order;
within a provider it retries up to that provider's attempt budget (3 for
remote, 1 for the deterministic providers — re-asking a pure function is
pointless). Structured outputs are JSON-extracted and schema-validated
before a response is accepted; an accepted remote response can be recorded
into the fixture store for deterministic replay.
"""

from __future__ import annotations

import json
import re
import threading
from collections.abc import Mapping
from dataclasses import dataclass, field

from scenesmith.errors import (
    AllProvidersFailed,
    ProviderTransientError,
    ProviderUnavailable,
    SchemaViolation,
)
from scenesmith.reasoner.fixtures import FixtureProvider, FixtureStore
from scenesmith.reasoner.requests import (
    ReasonerRequest,
    ReasonerResponse,
    request_digest,
)
from scenesmith.reasoner.schemas import validate_payload
from scenesmith.reasoner.templates import TemplateLibrary, default_library

DEFAULT_ATTEMPTS = {"remote": 3, "fixture": 1, "heuristic": 1}

_FENCE = re.compile(r"```(?:json)?\s*(.*?)```", re.DOTALL)


def extract_json(text: str):
    """Parse the first JSON value found in a possibly chatty response."""
    candidate = text.strip()
    fenced = _FENCE.search(candidate)
    if fenced:
        candidate = fenced.group(1).strip()
    try:
        return json.loads(candidate)
    except json.JSONDecodeError:
        pass
    start = candidate.find("{")
    if start < 0:
        raise ValueError("no JSON object in response")
    return json.JSONDecoder().raw_decode(candidate[start:])[0]


def build_request(
    template_id: str,
    variables: Mapping[str, object],
    images: tuple[bytes, ...] = (),
    library: TemplateLibrary | None = None,
) -> ReasonerRequest:
    lib = library or default_library()
    return ReasonerRequest(
        template_id=template_id,
        rendered_prompt=lib.render(template_id, variables),
        images=tuple(images),
    )


@dataclass
class ProviderPolicy:
    """Which providers to consult, in order, and their retry budgets."""

    order: tuple[str, ...] = ("fixture", "heuristic")
    attempts: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_ATTEMPTS))

    def budget(self, name: str) -> int:
        return max(1, self.attempts.get(name, 1))


class ReasonerGateway:
    def __init__(
        self,
        providers: Mapping[str, object] | None = None,
        fixture_store: FixtureStore | None = None,
        policy: ProviderPolicy | None = None,
        record_remote: bool = False,
    ):
        self._providers = dict(providers or {})
        self.fixture_store = fixture_store
        if fixture_store is not None and "fixture" not in self._providers:
            self._providers["fixture"] = FixtureProvider(fixture_store)
        self.policy = policy or ProviderPolicy()
        self.record_remote = record_remote
        self._record_lock = threading.Lock()

    def provider(self, name: str):
        return self._providers.get(name)

    def invoke(
        self, request: ReasonerRequest, policy: ProviderPolicy | None = None
    ) -> ReasonerResponse:
        policy = policy or self.policy
        tried_any = False
        schema_failure: Exception | None = None
        failures: list[str] = []
        for name in policy.order:
            provider = self._providers.get(name)
            if provider is None:
                continue
            tried_any = True
            for attempt in range(1, policy.budget(name) + 1):
                try:
                    text = provider.complete(request)
                except ProviderUnavailable as e:
                    failures.append(f"{name}: {e}")
                    break  # nothing to gain from re-asking
                except ProviderTransientError as e:
                    failures.append(f"{name}[{attempt}]: {e}")
                    continue
                try:
                    parsed = extract_json(text)
                    validate_payload(request.template_id, parsed)
                except (ValueError, SchemaViolation) as e:
                    schema_failure = e
                    failures.append(f"{name}[{attempt}]: {e}")
                    continue
                response = ReasonerResponse(
                    text=text, parsed=parsed, provider=name, attempt=attempt
                )
                # ``is not None``: an empty FixtureStore is falsy via __len__.
                if (
                    name == "remote"
                    and self.record_remote
                    and self.fixture_store is not None
                ):
                    self.record(request, response)
                return response
        if schema_failure is not None:
            raise SchemaViolation(
                f"{request.template_id}: no provider produced valid output "
                f"({'; '.join(failures)})"
            )
        if not tried_any:
            raise AllProvidersFailed(
                f"no providers configured for order {policy.order}"
            )
        raise AllProvidersFailed(
            f"{request.template_id}: {'; '.join(failures) or 'all providers exhausted'}"
        )

    def record(self, request: ReasonerRequest, response: ReasonerResponse) -> str:
        """Persist a remote response for replay; returns the digest."""
        if response.provider != "remote":
            raise ValueError("only remote responses are recorded as fixtures")
        if self.fixture_store is None:
            raise ValueError("gateway has no fixture store")
        digest = request_digest(request)
        with self._record_lock:
            self.fixture_store.put(digest, response.text)
        return digest


def default_gateway(
    fixture_store: FixtureStore | None = None,
    remote=None,
    policy: ProviderPolicy | None = None,
) -> ReasonerGateway:
    """Fixture -> heuristic gateway, optionally fronted by a remote provider."""
    from scenesmith.reasoner.heuristic import HeuristicProvider

    providers: dict[str, object] = {"heuristic": HeuristicProvider()}
    if remote is not None:
        providers["remote"] = remote
        if policy is None:
            policy = ProviderPolicy(order=("remote", "fixture", "heuristic"))
    return ReasonerGateway(
        providers=providers, fixture_store=fixture_store, policy=policy
    )
