"""Layout stage: asset proposal, placement, iterative visual refinement.

Every reasoner interaction goes through the gateway, so the whole stage
runs identically against recorded fixtures, the deterministic heuristic,
or a live remote model. The refinement loop is strictly bounded: at most
``max_iters`` reasoner rounds, each applying the returned moves (clamped
to the workspace) before re-rendering.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Mapping

from ..core.geometry import VALID_YAWS, Extents, Placement, Vec3
from ..core.lifecycle import PlaceholderState
from ..core.scene import SceneGraph
from ..core.canonical import canonical_scene_text
from ..errors import AllProvidersFailed, SchemaViolation
from ..reasoner import ReasonerGateway, build_request
from .orientation import FacingDirection, yaw_between
from .render import MarkedRender, render_topdown
from .solver import solve_layout

log = logging.getLogger(__name__)

DEFAULT_MAX_ASSETS = 12
DEFAULT_MAX_ITERS = 3


@dataclass(frozen=True)
class AssetSpec:
    """One asset to be placed: display name plus catalog search query."""

    name: str
    query: str
    extents: Extents
    count: int = 1

    def __post_init__(self):
        if not self.name:
            raise ValueError("asset name must be non-empty")
        if self.count < 1:
            raise ValueError("asset count must be >= 1")


@dataclass(frozen=True)
class LayoutEntry:
    extents: Extents
    position: Vec3
    yaw_deg: int = 0

    def __post_init__(self):
        if self.yaw_deg not in VALID_YAWS:
            raise ValueError(f"yaw must be one of {VALID_YAWS}")


@dataclass(frozen=True)
class LayoutProposal:
    """Complete placement plan: every named object has exactly one entry."""

    entries: dict[str, LayoutEntry]

    def __post_init__(self):
        if any(not name for name in self.entries):
            raise ValueError("layout entries must have non-empty names")

    def names(self) -> list[str]:
        return sorted(self.entries)


@dataclass(frozen=True)
class ImproveResult:
    proposal: LayoutProposal
    iterations_used: int
    partial: bool = False
    clamped: tuple[str, ...] = ()
    log: tuple[str, ...] = ()


@dataclass(frozen=True)
class OrientationResult:
    yaw_deg: int
    detected: FacingDirection
    warning: bool = False


@dataclass(frozen=True)
class LayoutEngineConfig:
    min_coord: float = -8.0
    max_coord: float = 8.0
    max_assets: int = DEFAULT_MAX_ASSETS
    default_extents: Extents = field(default_factory=lambda: Extents(1.0, 1.0, 1.0))
    default_origin: Vec3 = field(default_factory=lambda: Vec3(0.0, 0.0, 0.0))

    def __post_init__(self):
        if self.min_coord >= self.max_coord:
            raise ValueError("min_coord must be below max_coord")
        if self.max_assets < 1:
            raise ValueError("max_assets must be >= 1")


def _snap_yaw(raw) -> int:
    yaw = int(round(float(raw) / 90.0)) * 90 % 360
    return yaw


@dataclass
class LayoutEngine:
    gateway: ReasonerGateway
    config: LayoutEngineConfig = field(default_factory=LayoutEngineConfig)

    # ----------------------------------------------------------- assets

    def propose_assets(
        self, prompt: str, requested_count: int | None = None
    ) -> list[AssetSpec]:
        """Assets worth placing for ``prompt``, each with a unique name.

        Multi-count proposals ("four chairs") expand into suffixed copies
        so downstream names stay unique. When ``requested_count`` is set
        the result has exactly that many entries (padded by reusing the
        proposal cyclically, trimmed otherwise); either way the total is
        capped at the configured maximum.
        """
        if not prompt or not prompt.strip():
            raise ValueError("prompt must be non-empty")
        if requested_count is not None and requested_count < 1:
            raise ValueError("requested_count must be >= 1")
        cap = self.config.max_assets
        if requested_count is not None:
            cap = min(cap, requested_count) if requested_count <= cap else cap
        response = self.gateway.invoke(
            build_request(
                "asset_proposal",
                {"prompt": prompt.strip(), "max_assets": str(self.config.max_assets)},
            )
        )
        raw_specs: list[AssetSpec] = []
        for entry in response.parsed["objects"]:
            ext = entry.get("suggested_extents")
            extents = Extents(*ext) if ext else self.config.default_extents
            raw_specs.append(
                AssetSpec(
                    name=entry["name"],
                    query=entry.get("query") or entry["name"],
                    extents=extents,
                    count=max(1, int(entry.get("count", 1))),
                )
            )
        if not raw_specs:
            raise SchemaViolation("asset proposal contained no objects")

        target = requested_count if requested_count is not None else min(
            sum(s.count for s in raw_specs), self.config.max_assets
        )
        target = min(target, self.config.max_assets)

        expanded: list[AssetSpec] = []
        seen: dict[str, int] = {}
        i = 0
        # Walk count-expanded specs, cycling if padding is needed.
        while len(expanded) < target:
            spec = raw_specs[i % len(raw_specs)]
            copies = spec.count if i < len(raw_specs) else 1
            for _ in range(copies):
                if len(expanded) >= target:
                    break
                n = seen.get(spec.name, 0) + 1
                seen[spec.name] = n
                name = spec.name if n == 1 else f"{spec.name}_{n}"
                expanded.append(
                    AssetSpec(name=name, query=spec.query, extents=spec.extents)
                )
            i += 1
        return expanded

    # ----------------------------------------------------------- layout

    def propose_layout(
        self,
        description: str,
        names: list[str],
        suggested: Mapping[str, Extents] | None = None,
    ) -> LayoutProposal:
        """Initial placement for every name; positions inside the bounds."""
        if not names:
            raise ValueError("at least one object name is required")
        if len(set(names)) != len(names):
            raise ValueError("object names must be unique")
        suggested = dict(suggested or {})

        if len(names) == 1:
            # Degenerate case needs no reasoning: single object at origin.
            only = names[0]
            return LayoutProposal(
                entries={
                    only: LayoutEntry(
                        extents=suggested.get(only, self.config.default_extents),
                        position=self.config.default_origin,
                    )
                }
            )

        response = self.gateway.invoke(
            build_request(
                "layout_initial",
                {
                    "objects": ", ".join(names),
                    "description": description,
                    "min_coord": f"{self.config.min_coord:g}",
                    "max_coord": f"{self.config.max_coord:g}",
                },
            )
        )
        by_name = {e["name"]: e for e in response.parsed["objects"]}
        missing = [n for n in names if n not in by_name]
        if missing:
            raise SchemaViolation(
                f"layout response missing entries for: {', '.join(missing)}"
            )
        entries: dict[str, LayoutEntry] = {}
        for name in names:
            entry = by_name[name]
            pos = Vec3(*(self._clamp(c) for c in entry["position"]))
            ext = entry.get("extents")
            extents = (
                Extents(*ext) if ext else suggested.get(name, self.config.default_extents)
            )
            entries[name] = LayoutEntry(
                extents=extents,
                position=pos,
                yaw_deg=_snap_yaw(entry.get("yaw_deg", 0)),
            )
        return LayoutProposal(entries=entries)

    def solve_to_proposal(self, objects, relations, suggested=None) -> LayoutProposal:
        """Constraint-solver placement wrapped as a proposal."""
        suggested = dict(suggested or {})
        positions = solve_layout(objects, relations)
        return LayoutProposal(
            entries={
                name: LayoutEntry(
                    extents=suggested.get(name, self.config.default_extents),
                    position=pos,
                )
                for name, pos in positions.items()
            }
        )

    # ------------------------------------------------------ improvement

    def improve_layout(
        self,
        scene: SceneGraph,
        description: str,
        max_iters: int = DEFAULT_MAX_ITERS,
        image_mode: str = "marked",
    ) -> ImproveResult:
        """Visual feedback loop over the scene's FirstPass placeholders.

        Each round renders the scene, shows the image plus canonical state
        to the reasoner, and applies the returned moves (positions clamped
        to the workspace, clamps noted in the log). The loop ends when the
        reasoner reports done or the round budget runs out; placeholders
        then advance FirstPass -> Finalized -> Removed. A provider failure
        mid-loop returns the last accepted state flagged partial.

        ``image_mode`` selects the feedback style: "marked" (default)
        attaches the numbered render, "plain" attaches an unnumbered one,
        and "none" sends the textual state alone.
        """
        if max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if image_mode not in ("none", "plain", "marked"):
            raise ValueError("image_mode must be one of: none, plain, marked")
        movable = [
            obj for obj in scene.objects.values()
            if obj.state is PlaceholderState.FIRST_PASS
        ]
        if not movable:
            raise ValueError("no FirstPass placeholders to improve")
        proposed = scene.objects_in_state(PlaceholderState.PROPOSED)
        if proposed:
            raise ValueError(
                f"placeholders still in Proposed state: {sorted(o.id for o in proposed)}"
            )
        movable_by_name: dict[str, str] = {}
        for obj in sorted(movable, key=lambda o: o.id):
            movable_by_name.setdefault(obj.name, obj.id)

        iterations_used = 0
        partial = False
        clamped: list[str] = []
        trail: list[str] = []

        for round_no in range(1, max_iters + 1):
            view = render_topdown(scene, marks=(image_mode == "marked"))
            request = build_request(
                "layout_update",
                {
                    "description": description,
                    "scene_state": canonical_scene_text(scene),
                    "legend": view.legend_text(scene) or "none",
                },
                images=() if image_mode == "none" else (view.image_png,),
            )
            try:
                response = self.gateway.invoke(request)
            except (AllProvidersFailed, SchemaViolation) as exc:
                partial = True
                trail.append(f"round {round_no}: provider failed ({exc})")
                break

            iterations_used = round_no
            moves = response.parsed.get("objects") or []
            applied = 0
            for move in moves:
                name = move["name"]
                obj_id = movable_by_name.get(name)
                if obj_id is None:
                    trail.append(f"round {round_no}: ignored move for unknown {name!r}")
                    continue
                obj = scene.objects[obj_id]
                raw = move["position"]
                pos = Vec3(*(self._clamp(c) for c in raw))
                if any(self._clamp(c) != float(c) for c in raw):
                    clamped.append(name)
                    trail.append(f"round {round_no}: clamped {name} into bounds")
                yaw = _snap_yaw(move.get("yaw_deg", obj.placement.yaw_deg))
                new_placement = Placement(
                    position=pos, yaw_deg=yaw, scale=obj.placement.scale
                )
                scene.replace_object(
                    dataclasses.replace(obj, placement=new_placement)
                )
                applied += 1
            trail.append(f"round {round_no}: applied {applied} move(s)")
            if response.parsed["done"]:
                break

        # Improvement is over either way; retire the placeholder visuals.
        for obj in movable:
            scene.advance_object(obj.id, PlaceholderState.FINALIZED)
            scene.advance_object(obj.id, PlaceholderState.REMOVED)

        entries = {
            obj.name: LayoutEntry(
                extents=scene.objects[obj.id].extents,
                position=scene.objects[obj.id].placement.position,
                yaw_deg=scene.objects[obj.id].placement.yaw_deg,
            )
            for obj in movable
        }
        return ImproveResult(
            proposal=LayoutProposal(entries=entries),
            iterations_used=iterations_used,
            partial=partial,
            clamped=tuple(dict.fromkeys(clamped)),
            log=tuple(trail),
        )

    # ------------------------------------------------------ orientation

    def resolve_orientation(
        self,
        image_png: bytes,
        intended: FacingDirection,
        asset_name: str = "asset",
    ) -> OrientationResult:
        """Yaw (counterclockwise from above) aligning the asset's authored
        facing with ``intended``; failures fall back to zero with a warning."""
        request = build_request(
            "orientation", {"asset_name": asset_name}, images=(image_png,)
        )
        try:
            response = self.gateway.invoke(request)
        except (AllProvidersFailed, SchemaViolation):
            log.warning("orientation probe failed for %s; defaulting yaw to 0", asset_name)
            return OrientationResult(0, FacingDirection.UNKNOWN, warning=True)
        detected = FacingDirection(response.parsed["facing"])
        return OrientationResult(
            yaw_deg=yaw_between(detected, intended),
            detected=detected,
            warning=False,
        )

    # ----------------------------------------------------------- helpers

    def _clamp(self, value) -> float:
        return min(max(float(value), self.config.min_coord), self.config.max_coord)


def render_scene(scene: SceneGraph) -> MarkedRender:
    """Convenience alias used by the CLI and tests."""
    return render_topdown(scene)
