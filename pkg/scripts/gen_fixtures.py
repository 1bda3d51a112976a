#!/usr/bin/env python3
"""Generate the packaged fixture stores for deterministic offline runs.

Three stores are produced under src/scenesmith/data/fixtures/, each a
directory of digest-keyed response texts plus a JSON metadata sidecar:

  pipeline/   a full two-prompt orchestrator session (static scene build,
              then an interactive behavior attach) recorded against the
              deterministic heuristic provider
  ablation/   a solver-backed scripted run of all four feedback conditions
              over a committed 6-scene dataset (ablation_dataset.jsonl)
  one_fix/    a hand-built four-object chain scene whose critic fixes
              exactly one violated relation per refinement round

Every store is verified by replaying it through a fixture-only gateway
before the metadata is written; a digest miss or behavioural drift fails
this script rather than surfacing later as a silent test skip. Rerunning
is idempotent because every input is seeded or hand-built.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from scenesmith.benchmark.dataset import (  # noqa: E402
    BenchmarkDataset,
    generate_dataset,
    load_dataset,
    save_dataset,
)
from scenesmith.core.canonical import canonical_scene_text, parse_canonical_scene, scene_hash  # noqa: E402
from scenesmith.core.geometry import Extents, Placement, Vec3  # noqa: E402
from scenesmith.core.lifecycle import PlaceholderState  # noqa: E402
from scenesmith.core.scene import SceneGraph, SceneObject  # noqa: E402
from scenesmith.evaluator.ablation import CONDITIONS, run_ablation  # noqa: E402
from scenesmith.evaluator.metrics import check_relation  # noqa: E402
from scenesmith.layout.solver import solve_layout  # noqa: E402
from scenesmith.orchestrator.pipeline import Orchestrator  # noqa: E402
from scenesmith.reasoner.fixtures import FixtureProvider, FixtureStore  # noqa: E402
from scenesmith.reasoner.gateway import ProviderPolicy, ReasonerGateway  # noqa: E402
from scenesmith.reasoner.heuristic import HeuristicProvider  # noqa: E402
from scenesmith.reasoner.requests import request_digest  # noqa: E402
from scenesmith.reasoner.scripted import ScriptedProvider  # noqa: E402

FIXTURE_ROOT = Path(__file__).resolve().parent.parent / "src" / "scenesmith" / "data" / "fixtures"

ABLATION_SEED = 20240607
ABLATION_SCENES = 6

PIPELINE_PROMPTS = (
    "add a campfire with two tents and a picnic table around it",
    "make the campfire grabbable",
)

ONE_FIX_NAMES = ("arch", "beacon", "cart", "drum")
ONE_FIX_DESCRIPTION = (
    "The arch is left of the beacon. "
    "The beacon is left of the cart. "
    "The cart is left of the drum."
)
ONE_FIX_RELATIONS = [
    ["arch", "Left", "beacon"],
    ["beacon", "Left", "cart"],
    ["cart", "Left", "drum"],
]
ONE_FIX_INITIAL_X = {"arch": 3.0, "beacon": 2.0, "cart": 1.0, "drum": 0.0}
ONE_FIX_MOVES = (
    {"done": False, "objects": [{"name": "arch", "position": [-3.0, 0.0, 0.0]}]},
    {"done": False, "objects": [{"name": "beacon", "position": [-2.0, 0.0, 0.0]}]},
    {"done": True, "objects": [{"name": "cart", "position": [-1.0, 0.0, 0.0]}]},
)


class RecordingProvider:
    """Delegates to an inner provider and records every exchange."""

    def __init__(self, inner, store: FixtureStore, name: str | None = None):
        self._inner = inner
        self._store = store
        self.name = name or inner.name

    def complete(self, request):
        text = self._inner.complete(request)
        self._store.put(request_digest(request), text)
        return text


def fixture_gateway(store_dir: Path) -> ReasonerGateway:
    return ReasonerGateway(
        {"fixture": FixtureProvider(FixtureStore(store_dir))},
        policy=ProviderPolicy(order=("fixture",)),
    )


def fresh_store(store_dir: Path) -> FixtureStore:
    store_dir.mkdir(parents=True, exist_ok=True)
    for old in store_dir.glob("*.txt"):
        old.unlink()
    return FixtureStore(store_dir)


def write_meta(path: Path, meta: dict) -> None:
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# --------------------------------------------------------------- pipeline


def run_pipeline(gateway: ReasonerGateway):
    orch = Orchestrator(gateway=gateway, seed=7)
    outcomes = [orch.handle_prompt(prompt) for prompt in PIPELINE_PROMPTS]
    return orch, outcomes


def gen_pipeline() -> dict:
    store = fresh_store(FIXTURE_ROOT / "pipeline")
    recorder = RecordingProvider(HeuristicProvider(), store, name="heuristic")
    record_gateway = ReasonerGateway(
        {"heuristic": recorder}, policy=ProviderPolicy(order=("heuristic",))
    )
    orch_a, outcomes_a = run_pipeline(record_gateway)

    orch_b, outcomes_b = run_pipeline(fixture_gateway(FIXTURE_ROOT / "pipeline"))
    hash_a, hash_b = scene_hash(orch_a.scene), scene_hash(orch_b.scene)
    assert hash_a == hash_b, f"replay diverged: {hash_a} != {hash_b}"
    for state in (PlaceholderState.PROPOSED, PlaceholderState.FIRST_PASS):
        leftovers = orch_b.scene.objects_in_state(state)
        assert not leftovers, f"{state} leftovers after replay: {leftovers}"
    assert not outcomes_b[0].errors and not outcomes_b[1].errors
    spans = {s.name: s for s in outcomes_b[0].trace.stages}
    assert spans["environment"].overlaps(spans["spatial"]), "stages did not overlap"

    meta = {
        "prompts": list(PIPELINE_PROMPTS),
        "final_hash": hash_b,
        "modes": [o.verdict.mode for o in outcomes_b],
        "created_ids": [list(o.created_ids) for o in outcomes_b],
        "behaviors": [
            [{"id": b.behavior_id, "kind": b.kind, "target": b.target_object_id} for b in o.behaviors]
            for o in outcomes_b
        ],
        "fixture_count": len(store),
        "seed": 7,
    }
    write_meta(FIXTURE_ROOT / "pipeline_meta.json", meta)
    print(f"pipeline: {len(store)} fixtures, final hash {hash_b[:12]}…")
    return meta


# --------------------------------------------------------------- ablation


def ablation_scripts(dataset: BenchmarkDataset) -> ScriptedProvider:
    """Queue layout responses for every condition, dataset order.

    Initial proposals put everything at the origin (accuracy 0: strict
    comparisons never accept ties). Text feedback then fixes the first
    half of the objects, plain visual all but one, marked visual all of
    them — mirroring the published ordering of the four conditions.
    """
    solved = {
        s.scene_id: solve_layout(s.objects, s.relations) for s in dataset.scenes
    }

    def bad_layout(scene):
        return {
            "objects": [
                {"name": n, "position": [0.0, 0.0, 0.0]} for n in scene.objects
            ]
        }

    def fix(scene, upto: int):
        moves = []
        for name in scene.objects[:upto]:
            p = solved[scene.scene_id][name]
            moves.append({"name": name, "position": [p.x, p.y, p.z]})
        return {"done": True, "objects": moves}

    initial = [bad_layout(s) for s in dataset.scenes]
    updates = []
    for s in dataset.scenes:  # text_feedback
        updates.append(fix(s, math.ceil(len(s.objects) / 2)))
    for s in dataset.scenes:  # visual_plain
        updates.append(fix(s, len(s.objects) - 1))
    for s in dataset.scenes:  # visual_marked
        updates.append(fix(s, len(s.objects)))
    return ScriptedProvider(
        {"layout_initial": initial * len(CONDITIONS), "layout_update": updates}
    )


def gen_ablation() -> dict:
    dataset_path = FIXTURE_ROOT / "ablation_dataset.jsonl"
    dataset = generate_dataset(ABLATION_SCENES, seed=ABLATION_SEED)
    save_dataset(dataset, dataset_path)
    dataset = load_dataset(dataset_path)

    store = fresh_store(FIXTURE_ROOT / "ablation")
    recorder = RecordingProvider(ablation_scripts(dataset), store)
    record_gateway = ReasonerGateway(
        {"fixture": recorder}, policy=ProviderPolicy(order=("fixture",))
    )
    report_a = run_ablation(dataset, record_gateway)

    report_b = run_ablation(dataset, fixture_gateway(FIXTURE_ROOT / "ablation"))
    for row_a, row_b in zip(report_a.rows, report_b.rows):
        assert row_a.accuracy == row_b.accuracy, (
            f"replay drift in {row_a.condition}: {row_a.accuracy} != {row_b.accuracy}"
        )
    accs = {row.condition: row.accuracy for row in report_b.rows}
    assert accs["no_feedback"] == 0.0
    assert accs["visual_marked"] == 1.0
    assert (
        accs["no_feedback"] <= accs["text_feedback"]
        <= accs["visual_plain"] <= accs["visual_marked"]
    )

    meta = {
        "dataset": dataset_path.name,
        "scenes": len(dataset.scenes),
        "relations": dataset.total_relations(),
        "seed": ABLATION_SEED,
        "accuracy": accs,
        "fixture_count": len(store),
    }
    write_meta(FIXTURE_ROOT / "ablation_meta.json", meta)
    print(f"ablation: {len(store)} fixtures over {len(dataset.scenes)} scenes; {accs}")
    return meta


# ---------------------------------------------------------------- one-fix


def build_one_fix_scene() -> SceneGraph:
    scene = SceneGraph()
    for i, name in enumerate(ONE_FIX_NAMES, start=1):
        scene.add_object(
            SceneObject(
                id=f"fix-{i}",
                name=name,
                extents=Extents(1.0, 1.0, 1.0),
                placement=Placement(position=Vec3(ONE_FIX_INITIAL_X[name], 0.0, 0.0)),
                state=PlaceholderState.FIRST_PASS,
                owner="fixture",
            )
        )
    return scene


def violated_count(positions: dict[str, Vec3]) -> int:
    from scenesmith.core.relations import SpatialRelation

    rels = [SpatialRelation.from_triple(t) for t in ONE_FIX_RELATIONS]
    return sum(1 for r in rels if not check_relation(positions, r).satisfied)


def gen_one_fix() -> dict:
    from scenesmith.layout.engine import LayoutEngine

    scene_path = FIXTURE_ROOT / "one_fix_scene.json"
    scene_path.write_text(
        canonical_scene_text(build_one_fix_scene()) + "\n", encoding="utf-8"
    )

    store = fresh_store(FIXTURE_ROOT / "one_fix")
    recorder = RecordingProvider(
        ScriptedProvider({"layout_update": list(ONE_FIX_MOVES)}), store
    )
    record_gateway = ReasonerGateway(
        {"fixture": recorder}, policy=ProviderPolicy(order=("fixture",))
    )
    scene = parse_canonical_scene(scene_path.read_text(encoding="utf-8"))
    engine = LayoutEngine(record_gateway)
    result = engine.improve_layout(scene, ONE_FIX_DESCRIPTION, max_iters=3)
    assert result.iterations_used == 3 and not result.partial

    # Replay and track the violated-relation count at each round boundary.
    scene = parse_canonical_scene(scene_path.read_text(encoding="utf-8"))
    counts = []

    class Spy:
        name = "fixture"

        def __init__(self, inner):
            self._inner = inner

        def complete(self, request):
            counts.append(violated_count(
                {o.name: o.placement.position for o in scene.objects.values()}
            ))
            return self._inner.complete(request)

    replay_gateway = ReasonerGateway(
        {"fixture": Spy(FixtureProvider(FixtureStore(FIXTURE_ROOT / "one_fix")))},
        policy=ProviderPolicy(order=("fixture",)),
    )
    result = LayoutEngine(replay_gateway).improve_layout(
        scene, ONE_FIX_DESCRIPTION, max_iters=3
    )
    counts.append(violated_count(
        {o.name: o.placement.position for o in scene.objects.values()}
    ))
    assert counts == [3, 2, 1, 0], f"violation trajectory was {counts}"
    assert result.iterations_used == 3 and not result.partial

    meta = {
        "scene_file": scene_path.name,
        "description": ONE_FIX_DESCRIPTION,
        "relations": ONE_FIX_RELATIONS,
        "expected_violations_per_round": [3, 2, 1, 0],
        "fixture_count": len(store),
    }
    write_meta(FIXTURE_ROOT / "one_fix_meta.json", meta)
    print(f"one_fix: {len(store)} fixtures, violations {counts}")
    return meta


def main() -> int:
    FIXTURE_ROOT.mkdir(parents=True, exist_ok=True)
    gen_pipeline()
    gen_ablation()
    gen_one_fix()
    print(f"fixture root: {FIXTURE_ROOT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
