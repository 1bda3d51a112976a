"""Runtime configuration for the CLI and server.

Sources merge in increasing precedence: built-in defaults, a JSON or
YAML config file, then ``SCENESMITH_*`` environment variables. Unknown
file keys are rejected outright — a typoed option that silently does
nothing is worse than an error.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

import yaml

_ENV_PREFIX = "SCENESMITH_"


@dataclass(frozen=True)
class CliConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    fixture_dir: str = ""
    provider_order: tuple[str, ...] = ("fixture", "heuristic")
    remote_url: str = ""
    remote_api_key: str = ""
    remote_model: str = "gpt-4o"
    record_remote: bool = False
    seed: int = 0
    max_improve_iters: int = 3
    min_coord: float = -8.0
    max_coord: float = 8.0

    def __post_init__(self):
        if self.port < 1 or self.port > 65535:
            raise ValueError("port out of range")
        if self.max_improve_iters < 1:
            raise ValueError("max_improve_iters must be >= 1")
        if self.min_coord >= self.max_coord:
            raise ValueError("min_coord must be below max_coord")
        object.__setattr__(self, "provider_order", tuple(self.provider_order))
        unknown = [p for p in self.provider_order if p not in ("remote", "fixture", "heuristic")]
        if unknown:
            raise ValueError(f"unknown providers in provider_order: {unknown}")


_FIELDS = {f.name: f for f in dataclasses.fields(CliConfig)}


def _coerce(name: str, raw: str):
    target = _FIELDS[name].type
    if name == "provider_order":
        return tuple(p.strip() for p in raw.split(",") if p.strip())
    if target == "int":
        return int(raw)
    if target == "float":
        return float(raw)
    if target == "bool":
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return raw


def load_config(path: str | Path | None = None, env: dict | None = None) -> CliConfig:
    """Build a config from defaults, an optional file, and the environment."""
    env = os.environ if env is None else env
    values: dict = {}

    if path is not None:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() in (".yaml", ".yml"):
            doc = yaml.safe_load(text) or {}
        else:
            doc = json.loads(text)
        if not isinstance(doc, dict):
            raise ValueError(f"config file {path} must hold a mapping")
        unknown = sorted(set(doc) - set(_FIELDS))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        values.update(doc)
        if "provider_order" in values:
            values["provider_order"] = tuple(values["provider_order"])

    for name in _FIELDS:
        env_key = _ENV_PREFIX + name.upper()
        if env_key in env:
            values[name] = _coerce(name, str(env[env_key]))

    return CliConfig(**values)


def build_gateway(config: CliConfig):
    """Provider stack described by the config, ready to invoke."""
    from .reasoner.fixtures import FixtureStore
    from .reasoner.gateway import ProviderPolicy, ReasonerGateway
    from .reasoner.heuristic import HeuristicProvider
    from .reasoner.remote import RemoteConfig, RemoteProvider

    providers: dict[str, object] = {"heuristic": HeuristicProvider()}
    store = None
    if config.fixture_dir:
        store = FixtureStore(Path(config.fixture_dir))
    if config.remote_url:
        providers["remote"] = RemoteProvider(
            RemoteConfig(
                base_url=config.remote_url,
                api_key=config.remote_api_key,
                model=config.remote_model,
            )
        )
    order = tuple(
        p
        for p in config.provider_order
        if p in providers or (p == "fixture" and store is not None)
    )
    return ReasonerGateway(
        providers=providers,
        fixture_store=store,
        policy=ProviderPolicy(order=order or ("heuristic",)),
        record_remote=config.record_remote,
    )
