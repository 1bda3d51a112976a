"""Reasoner gateway: templates, schemas, providers, fixtures."""

from scenesmith.reasoner.fixtures import FixtureProvider, FixtureStore
from scenesmith.reasoner.gateway import (
    ProviderPolicy,
    ReasonerGateway,
    build_request,
    default_gateway,
    extract_json,
)
from scenesmith.reasoner.heuristic import HeuristicProvider
from scenesmith.reasoner.remote import RemoteConfig, RemoteProvider
from scenesmith.reasoner.requests import (
    PROVIDER_NAMES,
    STRUCTURED_TEMPLATES,
    TEMPLATE_IDS,
    ReasonerRequest,
    ReasonerResponse,
    request_digest,
)
from scenesmith.reasoner.schemas import SCHEMAS, validate_payload
from scenesmith.reasoner.scripted import ScriptedProvider
from scenesmith.reasoner.templates import TemplateLibrary, default_library, input_block

__all__ = [
    "PROVIDER_NAMES",
    "SCHEMAS",
    "STRUCTURED_TEMPLATES",
    "TEMPLATE_IDS",
    "FixtureProvider",
    "FixtureStore",
    "HeuristicProvider",
    "ProviderPolicy",
    "ReasonerGateway",
    "ReasonerRequest",
    "ReasonerResponse",
    "RemoteConfig",
    "RemoteProvider",
    "ScriptedProvider",
    "TemplateLibrary",
    "build_request",
    "default_gateway",
    "default_library",
    "extract_json",
    "input_block",
    "request_digest",
]
