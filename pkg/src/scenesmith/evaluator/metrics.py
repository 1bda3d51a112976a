"""Layout scoring: strict per-axis coordinate comparison per relation.

The rule, per relation kind (source coordinate vs target coordinate on the
kind's axis): Left/Front/Below require strictly less; Right/Behind/Above
require strictly greater. Exact ties never satisfy. Accuracy is the ratio
of satisfied relations to total relations; a stricter all-or-nothing
per-scene ratio is also computed for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scenesmith.benchmark.dataset import BenchmarkDataset
from scenesmith.core.geometry import Vec3
from scenesmith.core.relations import SpatialRelation, SpatialRelationKind
from scenesmith.errors import MissingObject

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


def _coord(position, axis: str) -> float:
    if isinstance(position, Vec3):
        return getattr(position, axis)
    return float(position[_AXIS_INDEX[axis]])


@dataclass(frozen=True)
class RelationVerdict:
    relation: SpatialRelation
    satisfied: bool
    delta: float
    missing_endpoint: bool = False


@dataclass
class EvaluationReport:
    condition: str
    verdicts: list[RelationVerdict] = field(default_factory=list)
    accuracy: float = 0.0
    per_kind: dict[str, tuple[int, int]] = field(default_factory=dict)
    scene_accuracy: float = 0.0
    missing_endpoints: int = 0

    def correct(self) -> int:
        return sum(1 for v in self.verdicts if v.satisfied)

    def total(self) -> int:
        return len(self.verdicts)


def check_relation(pred, rel: SpatialRelation) -> RelationVerdict:
    """Verdict for one relation against predicted positions.

    delta = coord(source) - coord(target) on the relation's axis; the
    relation holds when delta's sign matches the kind's requirement.
    """
    for endpoint in (rel.source, rel.target):
        if endpoint not in pred:
            raise MissingObject(f"no predicted position for {endpoint!r}")
    delta = _coord(pred[rel.source], rel.kind.axis) - _coord(pred[rel.target], rel.kind.axis)
    satisfied = delta < 0 if rel.kind.source_is_lesser else delta > 0
    return RelationVerdict(rel, satisfied, delta)


def evaluate(dataset: BenchmarkDataset, predictions, condition: str = "") -> EvaluationReport:
    """Score predictions (scene_id -> name -> position) against a dataset.

    Every scene must have a predictions entry; within a scene, relations
    with unpredicted endpoints count as unsatisfied and are flagged rather
    than aborting the run.
    """
    for scene in dataset.scenes:
        if scene.scene_id not in predictions:
            raise ValueError(f"no predictions for scene {scene.scene_id!r}")
    verdicts: list[RelationVerdict] = []
    per_kind = {k.value: [0, 0] for k in SpatialRelationKind}
    scenes_perfect = 0
    missing = 0
    for scene in dataset.scenes:
        pred = predictions[scene.scene_id]
        scene_ok = bool(scene.relations)
        for rel in scene.relations:
            try:
                v = check_relation(pred, rel)
            except MissingObject:
                v = RelationVerdict(rel, False, 0.0, missing_endpoint=True)
                missing += 1
            verdicts.append(v)
            per_kind[rel.kind.value][1] += 1
            if v.satisfied:
                per_kind[rel.kind.value][0] += 1
            else:
                scene_ok = False
        if scene_ok:
            scenes_perfect += 1
    total = len(verdicts)
    correct = sum(1 for v in verdicts if v.satisfied)
    return EvaluationReport(
        condition=condition,
        verdicts=verdicts,
        accuracy=correct / total if total else 0.0,
        per_kind={k: (c, t) for k, (c, t) in per_kind.items()},
        scene_accuracy=scenes_perfect / len(dataset.scenes) if dataset.scenes else 0.0,
        missing_endpoints=missing,
    )
