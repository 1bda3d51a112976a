"""Feedback ablation: how much does each feedback channel buy?

Four conditions, differing only in what the layout loop gets to see
after the initial placement:

    no_feedback     initial placement only, no refinement rounds
    text_feedback   refinement with the textual scene state alone
    visual_plain    refinement with an unnumbered render attached
    visual_marked   refinement with the numbered render and legend

Each row reports measured accuracy next to the published reference
accuracy for the matching condition; references come from a full-scale
study with a live vision reasoner and are context, not a target this
harness reproduces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from ..benchmark.dataset import BenchmarkDataset
from ..core.geometry import Placement, Vec3
from ..core.lifecycle import PlaceholderState
from ..core.scene import ObjectIdAllocator, SceneGraph, SceneObject
from ..layout.engine import LayoutEngine, LayoutEngineConfig
from ..reasoner.gateway import ReasonerGateway
from .metrics import EvaluationReport, evaluate

CONDITIONS: tuple[str, ...] = (
    "no_feedback",
    "text_feedback",
    "visual_plain",
    "visual_marked",
)

# Published full-scale reference accuracies (percent) per condition.
REFERENCE_ACCURACY: dict[str, float] = {
    "no_feedback": 71.4,
    "text_feedback": 83.3,
    "visual_plain": 83.5,
    "visual_marked": 88.8,
}

_DISPLAY = {
    "no_feedback": "No feedback",
    "text_feedback": "Text feedback",
    "visual_plain": "Visual (no marks)",
    "visual_marked": "Visual + marks",
}

_IMAGE_MODE = {
    "text_feedback": "none",
    "visual_plain": "plain",
    "visual_marked": "marked",
}


@dataclass(frozen=True)
class AblationRow:
    condition: str
    accuracy: float
    relations: int
    reference: float | None

    @property
    def display_name(self) -> str:
        return _DISPLAY.get(self.condition, self.condition)


@dataclass(frozen=True)
class AblationReport:
    rows: tuple[AblationRow, ...]
    provider: str
    reports: Mapping[str, EvaluationReport]

    def format_table(self) -> str:
        """Aligned four-column table, one row per condition."""
        header = f"| {'Condition':<19} | {'Accuracy (%)':>12} | {'Reference (%)':>13} |"
        rule = f"|{'-' * 21}|{'-' * 14}|{'-' * 15}|"
        lines = [header, rule]
        for row in self.rows:
            ref = f"{row.reference:.1f}" if row.reference is not None else "-"
            lines.append(
                f"| {row.display_name:<19} | {row.accuracy * 100.0:>12.1f} | {ref:>13} |"
            )
        return "\n".join(lines)


def _scene_with_placeholders(names, proposal) -> SceneGraph:
    scene = SceneGraph()
    alloc = ObjectIdAllocator("abl")
    for name in names:
        entry = proposal.entries[name]
        scene.add_object(
            SceneObject(
                id=alloc.next_id(),
                name=name,
                extents=entry.extents,
                placement=Placement(position=entry.position, yaw_deg=entry.yaw_deg),
                state=PlaceholderState.FIRST_PASS,
            )
        )
    return scene


def predict_layouts(
    dataset: BenchmarkDataset,
    gateway: ReasonerGateway,
    condition: str,
    max_iters: int = 3,
    engine_config: LayoutEngineConfig | None = None,
) -> dict[str, dict[str, Vec3]]:
    """Run the layout pipeline under one feedback condition.

    Returns name -> position mappings per scene id, suitable for
    :func:`scenesmith.evaluator.metrics.evaluate`.
    """
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}")
    engine = LayoutEngine(gateway, engine_config or LayoutEngineConfig())
    predictions: dict[str, dict[str, Vec3]] = {}
    for scene_desc in dataset.scenes:
        names = list(scene_desc.objects)
        proposal = engine.propose_layout(scene_desc.description, names)
        if condition == "no_feedback":
            predictions[scene_desc.scene_id] = {
                name: proposal.entries[name].position for name in names
            }
            continue
        scene = _scene_with_placeholders(names, proposal)
        engine.improve_layout(
            scene,
            scene_desc.description,
            max_iters=max_iters,
            image_mode=_IMAGE_MODE[condition],
        )
        predictions[scene_desc.scene_id] = {
            obj.name: obj.placement.position for obj in scene.objects.values()
        }
    return predictions


def run_ablation(
    dataset: BenchmarkDataset,
    gateway: ReasonerGateway | Callable[[str], ReasonerGateway],
    conditions: tuple[str, ...] = CONDITIONS,
    max_iters: int = 3,
    provider: str = "",
    engine_config: LayoutEngineConfig | None = None,
) -> AblationReport:
    """Evaluate every requested condition over the dataset.

    ``gateway`` is either shared across conditions or a factory keyed by
    condition name (needed when replaying per-condition fixtures). An
    empty condition tuple yields an empty report.
    """
    rows: list[AblationRow] = []
    reports: dict[str, EvaluationReport] = {}
    for condition in conditions:
        gw = gateway(condition) if callable(gateway) else gateway
        if not provider:
            provider = next(
                (name for name in gw.policy.order if gw.provider(name) is not None),
                "unknown",
            )
        predictions = predict_layouts(
            dataset, gw, condition, max_iters=max_iters, engine_config=engine_config
        )
        report = evaluate(dataset, predictions, condition=condition)
        reports[condition] = report
        rows.append(
            AblationRow(
                condition=condition,
                accuracy=report.accuracy,
                relations=report.total(),
                reference=REFERENCE_ACCURACY.get(condition),
            )
        )
    return AblationReport(rows=tuple(rows), provider=provider or "unknown", reports=reports)
