"""Concurrent environment selection.

Five sub-requests (terrain, material, terrain layer, skybox, water) resolve
independently and concurrently; a component that fails after its retry
budget — or answers off its preset list — falls back to its registered
default and is flagged in the resulting spec's ``fallbacks``.
"""

from __future__ import annotations

import zlib
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass, field

from scenesmith.environment.presets import Registries, default_registries
from scenesmith.environment.types import ElevationRef, EnvironmentSpec
from scenesmith.errors import AllProvidersFailed, SchemaViolation
from scenesmith.reasoner.gateway import ReasonerGateway, build_request

COMPONENTS = ("terrain", "material", "terrain_layer", "skybox", "water")


@dataclass(frozen=True)
class ComponentOutcome:
    component: str
    value: object
    provider: str | None
    fell_back: bool
    detail: str = ""


@dataclass
class EnvironmentSelection:
    spec: EnvironmentSpec
    outcomes: list[ComponentOutcome] = field(default_factory=list)


def prompt_seed(prompt: str) -> int:
    return zlib.crc32(prompt.encode("utf-8")) & 0x7FFFFFFF


def _options_line(options) -> str:
    return ", ".join(o for o in options)


def _select_terrain(prompt: str, gateway: ReasonerGateway, reg: Registries):
    probe = gateway.invoke(build_request("terrain_realistic", {"prompt": prompt}))
    if probe.parsed["match"]:
        ref = ElevationRef(
            lat=probe.parsed["lat"],
            lon=probe.parsed["lon"],
            extent_m=probe.parsed.get("extent_m", 1000.0),
        )
        return ("realworld", "realistic", None, ref), probe.provider
    lowpoly_options = [o for o in reg.terrain.options if reg.terrain.noise_for(o)]
    resp = gateway.invoke(
        build_request(
            "terrain_lowpoly",
            {"prompt": prompt, "presets": _options_line(lowpoly_options)},
        )
    )
    kind = resp.parsed["terrain_kind"]
    noise = reg.terrain.noise_for(kind) if kind in reg.terrain else None
    if noise is None:
        raise SchemaViolation(f"terrain kind {kind!r} not in preset list")
    return (kind, "low_poly", noise, None), resp.provider


def _select_named(
    template_id: str, key: str, prompt: str, gateway: ReasonerGateway, registry
):
    resp = gateway.invoke(
        build_request(
            template_id, {"prompt": prompt, "presets": _options_line(registry.options)}
        )
    )
    name = resp.parsed[key]
    if name not in registry:
        raise SchemaViolation(f"{key} {name!r} not in preset list")
    return name, resp.provider


def _select_water(prompt: str, gateway: ReasonerGateway):
    resp = gateway.invoke(build_request("water", {"prompt": prompt}))
    return bool(resp.parsed["water"]), resp.provider


def select_environment(
    prompt: str,
    gateway: ReasonerGateway,
    registries: Registries | None = None,
    seed: int | None = None,
    executor: Executor | None = None,
) -> EnvironmentSelection:
    if not prompt.strip():
        raise ValueError("prompt must be non-empty")
    reg = registries or default_registries()

    jobs = {
        "terrain": lambda: _select_terrain(prompt, gateway, reg),
        "material": lambda: _select_named("material", "material", prompt, gateway, reg.materials),
        "terrain_layer": lambda: _select_named(
            "terrain_layer", "terrain_layer", prompt, gateway, reg.terrain_layers
        ),
        "skybox": lambda: _select_named("skybox", "skybox", prompt, gateway, reg.skyboxes),
        "water": lambda: _select_water(prompt, gateway),
    }
    defaults = {
        "terrain": (reg.terrain.default, "low_poly", reg.terrain.noise_for(reg.terrain.default), None),
        "material": reg.materials.default,
        "terrain_layer": reg.terrain_layers.default,
        "skybox": reg.skyboxes.default,
        "water": False,
    }

    own_executor = executor is None
    pool = executor or ThreadPoolExecutor(max_workers=len(COMPONENTS))
    try:
        futures = {name: pool.submit(job) for name, job in jobs.items()}
        outcomes = {}
        for name in COMPONENTS:
            try:
                value, provider = futures[name].result()
                outcomes[name] = ComponentOutcome(name, value, provider, fell_back=False)
            except (AllProvidersFailed, SchemaViolation) as e:
                outcomes[name] = ComponentOutcome(
                    name, defaults[name], None, fell_back=True, detail=str(e)
                )
    finally:
        if own_executor:
            pool.shutdown(wait=False)

    terrain_kind, realism, noise, elevation_ref = outcomes["terrain"].value
    spec = EnvironmentSpec(
        terrain_kind=terrain_kind,
        realism=realism,
        noise=noise,
        elevation_ref=elevation_ref,
        material=outcomes["material"].value,
        terrain_layer=outcomes["terrain_layer"].value,
        skybox=outcomes["skybox"].value,
        water=outcomes["water"].value,
        seed=prompt_seed(prompt) if seed is None else seed,
        fallbacks=tuple(n for n in COMPONENTS if outcomes[n].fell_back),
    )
    return EnvironmentSelection(spec=spec, outcomes=[outcomes[n] for n in COMPONENTS])
