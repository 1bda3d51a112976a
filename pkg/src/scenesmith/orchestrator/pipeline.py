"""Prompt orchestration: routing, environment + layout stages, behaviors.

One prompt flows decide -> (environment ∥ spatial) -> behavior. The
environment stage runs on a worker thread while the spatial stage keeps
the calling thread, so their trace spans overlap; scene mutations all
happen on the calling thread after both finish their reasoning.
"""

from __future__ import annotations

import dataclasses
import logging
import time
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from threading import RLock

from ..catalog.index import CatalogIndex
from ..catalog.sketch import SketchMatch, sketch_to_asset
from ..catalog.store import AssetInfoRecord, AssetInfoStore
from ..core.geometry import Extents, Placement
from ..core.lifecycle import PlaceholderState
from ..core.scene import ObjectIdAllocator, SceneGraph, SceneObject
from ..environment.presets import Registries, default_registries
from ..environment.select import EnvironmentSelection, select_environment
from ..errors import AllProvidersFailed, EmptyCatalog, SchemaViolation, TargetNotFound
from ..layout.engine import AssetSpec, LayoutEngine, LayoutEngineConfig
from ..reasoner.gateway import ReasonerGateway, build_request
from .behaviors import BehaviorIdAllocator, attach_behavior, find_target_id

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StageSpan:
    name: str
    start: float
    end: float

    def overlaps(self, other: "StageSpan") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class PipelineTrace:
    stages: tuple[StageSpan, ...]
    events: tuple[str, ...]

    def span(self, name: str) -> StageSpan | None:
        return next((s for s in self.stages if s.name == name), None)

    def overlapping(self, a: str, b: str) -> bool:
        sa, sb = self.span(a), self.span(b)
        return bool(sa and sb and sa.overlaps(sb))


class _TraceRecorder:
    def __init__(self):
        self._stages: list[StageSpan] = []
        self._events: list[str] = []
        self._lock = RLock()

    def add_span(self, name: str, start: float, end: float) -> None:
        with self._lock:
            self._stages.append(StageSpan(name, start, end))

    def event(self, message: str) -> None:
        with self._lock:
            self._events.append(message)

    def freeze(self) -> PipelineTrace:
        with self._lock:
            spans = tuple(sorted(self._stages, key=lambda s: (s.start, s.name)))
            return PipelineTrace(stages=spans, events=tuple(self._events))


@dataclass(frozen=True)
class DeciderVerdict:
    mode: str
    rationale: str = ""
    behavior: dict | None = None

    def __post_init__(self):
        if self.mode not in ("static_scene", "interactive"):
            raise ValueError(f"unknown decider mode {self.mode!r}")


@dataclass(frozen=True)
class PromptOutcome:
    prompt: str
    verdict: DeciderVerdict
    trace: PipelineTrace
    created_ids: tuple[str, ...] = ()
    environment: EnvironmentSelection | None = None
    behaviors: tuple = ()
    errors: tuple[str, ...] = ()
    scene_revision: int = 0


@dataclass
class Orchestrator:
    """Owns the authoritative scene and drives the reasoning pipeline."""

    gateway: ReasonerGateway
    registries: Registries | None = None
    catalog: CatalogIndex | None = None
    asset_store: AssetInfoStore = field(default_factory=AssetInfoStore)
    engine_config: LayoutEngineConfig = field(default_factory=LayoutEngineConfig)
    seed: int = 0
    scene: SceneGraph | None = None

    def __post_init__(self):
        if self.registries is None:
            self.registries = default_registries()
        if self.scene is None:
            self.scene = SceneGraph()
        self.engine = LayoutEngine(self.gateway, self.engine_config)
        self._object_ids = ObjectIdAllocator("obj")
        self._behavior_ids = BehaviorIdAllocator()
        self._lock = RLock()

    # ------------------------------------------------------------ routing

    def decide(self, prompt: str) -> DeciderVerdict:
        """Route a prompt: static scene content vs interactive behavior."""
        if not prompt or not prompt.strip():
            raise ValueError("prompt must be non-empty")
        known = sorted({o.name for o in self.scene.objects.values()})
        response = self.gateway.invoke(
            build_request(
                "decider",
                {
                    "prompt": prompt.strip(),
                    "known_objects": ", ".join(known) if known else "none",
                },
            )
        )
        parsed = response.parsed
        return DeciderVerdict(
            mode=parsed["mode"],
            rationale=parsed.get("rationale", ""),
            behavior=parsed.get("behavior"),
        )

    # ------------------------------------------------------------- prompt

    def handle_prompt(self, prompt: str, owner: str = "local") -> PromptOutcome:
        """Run the full pipeline for one prompt; serialized per instance."""
        with self._lock:
            return self._handle_prompt_locked(prompt, owner)

    def _handle_prompt_locked(self, prompt: str, owner: str) -> PromptOutcome:
        trace = _TraceRecorder()
        errors: list[str] = []
        created: tuple[str, ...] = ()
        behaviors: list = []
        selection: EnvironmentSelection | None = None

        t0 = time.monotonic()
        verdict = self.decide(prompt)
        trace.add_span("decide", t0, time.monotonic())
        trace.event(f"decider mode: {verdict.mode}")

        if verdict.mode == "interactive":
            self._apply_behavior(verdict.behavior, owner, trace, errors, behaviors)
            return PromptOutcome(
                prompt=prompt,
                verdict=verdict,
                trace=trace.freeze(),
                behaviors=tuple(behaviors),
                errors=tuple(errors),
                scene_revision=self.scene.revision,
            )

        env_future: Future | None = None
        executor: ThreadPoolExecutor | None = None
        if self.scene.environment is None:
            executor = ThreadPoolExecutor(
                max_workers=1, thread_name_prefix="environment"
            )
            env_submit = time.monotonic()

            def _env_job() -> EnvironmentSelection:
                result = select_environment(
                    prompt, self.gateway, self.registries, seed=self.seed
                )
                trace.add_span("environment", env_submit, time.monotonic())
                return result

            env_future = executor.submit(_env_job)
            trace.event("environment stage scheduled")

        try:
            created = self._spatial_stage(prompt, owner, trace, errors)
        finally:
            if env_future is not None:
                try:
                    selection = env_future.result()
                    self.scene.set_environment(selection.spec)
                    if selection.spec.fallbacks:
                        trace.event(
                            "environment fallbacks: "
                            + ", ".join(selection.spec.fallbacks)
                        )
                except (AllProvidersFailed, SchemaViolation, ValueError) as exc:
                    errors.append(f"environment stage failed: {exc}")
                executor.shutdown(wait=False)

        if verdict.behavior:
            # Mixed prompt: content first, then the queued behavior.
            trace.event("applying queued behavior request")
            self._apply_behavior(verdict.behavior, owner, trace, errors, behaviors)

        return PromptOutcome(
            prompt=prompt,
            verdict=verdict,
            trace=trace.freeze(),
            created_ids=created,
            environment=selection,
            behaviors=tuple(behaviors),
            errors=tuple(errors),
            scene_revision=self.scene.revision,
        )

    # ------------------------------------------------------------- stages

    def _spatial_stage(
        self, prompt: str, owner: str, trace: _TraceRecorder, errors: list[str]
    ) -> tuple[str, ...]:
        start = time.monotonic()
        try:
            specs = self.engine.propose_assets(prompt)
        except (AllProvidersFailed, SchemaViolation) as exc:
            errors.append(f"asset proposal failed: {exc}")
            trace.add_span("spatial", start, time.monotonic())
            return ()
        trace.event(f"proposed assets: {', '.join(s.name for s in specs)}")

        uid_by_name = {spec.name: self._lookup_asset(spec, trace) for spec in specs}

        created_ids: list[str] = []
        for spec in specs:
            obj = SceneObject(
                id=self._object_ids.next_id(),
                name=spec.name,
                extents=spec.extents,
                placement=Placement(position=self.engine.config.default_origin),
                state=PlaceholderState.PROPOSED,
                owner=owner,
            )
            self.scene.add_object(obj)
            created_ids.append(obj.id)

        try:
            proposal = self.engine.propose_layout(
                prompt,
                [s.name for s in specs],
                suggested={s.name: s.extents for s in specs},
            )
        except (AllProvidersFailed, SchemaViolation) as exc:
            errors.append(f"initial layout failed: {exc}")
            for obj_id in created_ids:
                self.scene.remove_object(obj_id)
            trace.add_span("spatial", start, time.monotonic())
            return ()

        for obj_id in created_ids:
            obj = self.scene.objects[obj_id]
            entry = proposal.entries[obj.name]
            advanced = dataclasses.replace(
                obj,
                placement=Placement(
                    position=entry.position, yaw_deg=entry.yaw_deg
                ),
                state=PlaceholderState.FIRST_PASS,
                asset_uid=uid_by_name.get(obj.name),
            )
            self.scene.replace_object(advanced)
        trace.event("placeholders advanced to FirstPass")

        improve = self.engine.improve_layout(self.scene, prompt)
        if improve.partial:
            errors.append("layout improvement ended early (provider failure)")
        trace.event(
            f"improvement used {improve.iterations_used} iteration(s)"
        )
        trace.add_span("spatial", start, time.monotonic())
        return tuple(created_ids)

    def _lookup_asset(self, spec: AssetSpec, trace: _TraceRecorder) -> str | None:
        if self.catalog is None:
            return None
        try:
            hit = self.catalog.search(spec.query, k=1)[0]
        except EmptyCatalog:
            trace.event(f"catalog empty; {spec.name} stays a placeholder")
            return None
        self.asset_store.put(
            AssetInfoRecord(
                uid=hit.uid,
                name=spec.name,
                download_url=hit.download_url,
                source="catalog",
            )
        )
        trace.event(f"asset match: {spec.name} -> {hit.uid}")
        return hit.uid

    def _apply_behavior(
        self,
        behavior: dict | None,
        owner: str,
        trace: _TraceRecorder,
        errors: list[str],
        attached: list,
    ) -> None:
        start = time.monotonic()
        try:
            if not behavior:
                raise TargetNotFound("interactive verdict carries no behavior block")
            target_id = find_target_id(self.scene, behavior.get("target", ""))
            descriptor = attach_behavior(
                self.scene,
                target_id,
                behavior.get("kind", "custom"),
                behavior.get("parameters", {}),
                self._behavior_ids.next_id(),
            )
            attached.append(descriptor)
            trace.event(
                f"behavior {descriptor.kind} attached to {descriptor.target_object_id}"
            )
        except (TargetNotFound, ValueError) as exc:
            errors.append(f"behavior not applied: {exc}")
            trace.event(f"behavior rejected: {exc}")
        finally:
            trace.add_span("behavior", start, time.monotonic())

    # ------------------------------------------------------------- sketch

    def handle_sketch(
        self, image_png: bytes, owner: str = "local", hint: str = ""
    ) -> tuple[SceneObject, SketchMatch]:
        """Spawn a FirstPass object from a sketch via catalog lookup."""
        if self.catalog is None:
            raise EmptyCatalog("no catalog configured for sketch lookup")
        with self._lock:
            match = sketch_to_asset(image_png, self.gateway, self.catalog, hint=hint)
            obj = SceneObject(
                id=self._object_ids.next_id(),
                name=match.tag,
                extents=Extents(1.0, 1.0, 1.0),
                placement=Placement(position=self.engine.config.default_origin),
                state=PlaceholderState.FIRST_PASS,
                owner=owner,
                asset_uid=match.hit.uid,
            )
            self.scene.add_object(obj)
            self.asset_store.put(
                AssetInfoRecord(
                    uid=match.hit.uid,
                    name=match.tag,
                    download_url=match.hit.download_url,
                    source="catalog",
                )
            )
            return obj, match
