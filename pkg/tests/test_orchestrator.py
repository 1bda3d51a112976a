"""Prompt pipeline: routing, stage concurrency, behaviors, sketch spawning."""

import json
from pathlib import Path

import pytest

from scenesmith.catalog import default_index
from scenesmith.core.canonical import scene_hash
from scenesmith.core.geometry import Extents, Placement, Vec3
from scenesmith.core.lifecycle import PlaceholderState
from scenesmith.core.scene import SceneGraph, SceneObject
from scenesmith.environment.select import COMPONENTS
from scenesmith.errors import EmptyCatalog, TargetNotFound
from scenesmith.orchestrator.behaviors import (
    BehaviorIdAllocator,
    attach_behavior,
    find_target_id,
)
from scenesmith.orchestrator.pipeline import (
    DeciderVerdict,
    Orchestrator,
    StageSpan,
)
from scenesmith.reasoner.fixtures import FixtureStore
from scenesmith.reasoner.gateway import ProviderPolicy, ReasonerGateway
from scenesmith.reasoner.scripted import ScriptedProvider

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "scenesmith" / "data" / "fixtures"

PIPELINE_META = json.loads((FIXTURES / "pipeline_meta.json").read_text())


def fixture_gateway(name):
    return ReasonerGateway(
        fixture_store=FixtureStore(FIXTURES / name),
        policy=ProviderPolicy(order=("fixture",)),
    )


def scripted_orchestrator(script, default=None, **kwargs):
    gateway = ReasonerGateway(
        {"fixture": ScriptedProvider(script, default=default)},
        policy=ProviderPolicy(order=("fixture",)),
    )
    return Orchestrator(gateway=gateway, **kwargs)


def seed_object(scene, obj_id, name, x=0.0):
    scene.add_object(
        SceneObject(
            id=obj_id,
            name=name,
            extents=Extents(1.0, 1.0, 1.0),
            placement=Placement(position=Vec3(x, 0.0, 0.0)),
            state=PlaceholderState.FINALIZED,
        )
    )


DECIDE_STATIC = '{"mode": "static_scene", "rationale": "content request"}'


def static_script(n_objects=2, env=False):
    """Scripts for one full static prompt over ``n_objects`` assets."""
    names = [f"item{i}" for i in range(1, n_objects + 1)]
    script = {
        "decider": [DECIDE_STATIC],
        "asset_proposal": [
            json.dumps({"objects": [{"name": n, "query": n} for n in names]})
        ],
        "layout_initial": [
            json.dumps(
                {
                    "objects": [
                        {"name": n, "position": [float(i), 0.0, 0.0]}
                        for i, n in enumerate(names)
                    ]
                }
            )
        ],
        "layout_update": ['{"done": true}'],
    }
    if env:
        script.update(
            {
                "terrain_realistic": ['{"match": false}'],
                "terrain_lowpoly": ['{"terrain_kind": "meadow"}'],
                "material": ['{"material": "grass"}'],
                "terrain_layer": ['{"terrain_layer": "Grass_TerrainLayer"}'],
                "skybox": ['{"skybox": "daytime_bright_skybox"}'],
                "water": ['{"water": false}'],
            }
        )
    return script


# --- packaged fixture replay -------------------------------------------------


@pytest.fixture(scope="module")
def replayed():
    orch = Orchestrator(gateway=fixture_gateway("pipeline"), seed=PIPELINE_META["seed"])
    outcomes = [orch.handle_prompt(p) for p in PIPELINE_META["prompts"]]
    return orch, outcomes


def test_replay_reproduces_the_recorded_scene_hash(replayed):
    orch, outcomes = replayed
    assert scene_hash(orch.scene) == PIPELINE_META["final_hash"]
    assert [o.verdict.mode for o in outcomes] == PIPELINE_META["modes"]
    assert [list(o.created_ids) for o in outcomes] == PIPELINE_META["created_ids"]


def test_replay_leaves_no_transient_placeholders(replayed):
    orch, outcomes = replayed
    assert orch.scene.objects_in_state(PlaceholderState.PROPOSED) == []
    assert orch.scene.objects_in_state(PlaceholderState.FIRST_PASS) == []
    assert all(not o.errors for o in outcomes)


def test_replay_runs_environment_and_spatial_concurrently(replayed):
    _, outcomes = replayed
    trace = outcomes[0].trace
    assert trace.overlapping("environment", "spatial")
    env, spatial = trace.span("environment"), trace.span("spatial")
    assert env is not None and spatial is not None and env.overlaps(spatial)


def test_replay_attaches_the_recorded_behavior(replayed):
    orch, outcomes = replayed
    expected = PIPELINE_META["behaviors"][1][0]
    descriptor = outcomes[1].behaviors[0]
    assert descriptor.behavior_id == expected["id"]
    assert descriptor.kind == expected["kind"]
    assert descriptor.target_object_id == expected["target"]
    target = orch.scene.objects[expected["target"]]
    assert any(b.behavior_id == expected["id"] for b in target.behaviors)


def test_replay_sets_environment_once(replayed):
    orch, outcomes = replayed
    assert orch.scene.environment is not None
    assert outcomes[0].environment is not None
    assert outcomes[1].environment is None  # second prompt reuses the backdrop
    assert outcomes[0].scene_revision < outcomes[1].scene_revision


# --- routing -----------------------------------------------------------------


def test_decide_parses_the_verdict():
    orch = scripted_orchestrator(
        {
            "decider": [
                '{"mode": "interactive", "rationale": "wants a tool", '
                '"behavior": {"target": "mug", "kind": "grabbable", "parameters": {}}}'
            ]
        }
    )
    verdict = orch.decide("make the mug grabbable")
    assert verdict.mode == "interactive"
    assert verdict.rationale == "wants a tool"
    assert verdict.behavior["target"] == "mug"


def test_decide_reports_known_objects_to_the_reasoner():
    captured = []

    def answer(req):
        captured.append(req.rendered_prompt)
        return DECIDE_STATIC

    orch = scripted_orchestrator({}, default=answer)
    orch.decide("anything")
    seed_object(orch.scene, "obj-9", "windmill")
    orch.decide("anything else")
    assert "none" in captured[0]
    assert "windmill" in captured[1]


def test_decide_rejects_blank_prompts_and_bad_modes():
    orch = scripted_orchestrator({})
    with pytest.raises(ValueError):
        orch.decide("   ")
    with pytest.raises(ValueError):
        DeciderVerdict(mode="dance")


# --- full prompt handling ----------------------------------------------------


def test_static_prompt_creates_finalized_objects():
    orch = scripted_orchestrator(static_script(n_objects=2, env=True))
    outcome = orch.handle_prompt("two items please", owner="alice")
    assert outcome.errors == ()
    assert len(outcome.created_ids) == 2
    for obj_id in outcome.created_ids:
        obj = orch.scene.objects[obj_id]
        assert obj.state is PlaceholderState.REMOVED
        assert obj.owner == "alice"
    assert outcome.environment is not None
    assert orch.scene.environment.terrain_kind == "meadow"
    assert orch.scene.environment.seed == orch.seed


def test_unscripted_environment_falls_back_without_failing_the_prompt():
    orch = scripted_orchestrator(static_script(env=False))
    outcome = orch.handle_prompt("two items")
    assert outcome.errors == ()
    assert orch.scene.environment is not None
    assert orch.scene.environment.fallbacks == COMPONENTS
    assert any("environment fallbacks" in e for e in outcome.trace.events)


def test_failed_asset_proposal_reports_error_and_creates_nothing():
    orch = scripted_orchestrator({"decider": [DECIDE_STATIC]})
    outcome = orch.handle_prompt("impossible request")
    assert outcome.created_ids == ()
    assert any("asset proposal failed" in e for e in outcome.errors)
    assert orch.scene.objects == {}


def test_failed_initial_layout_rolls_back_created_placeholders():
    script = static_script(n_objects=2)
    script.pop("layout_initial")
    orch = scripted_orchestrator(script)
    outcome = orch.handle_prompt("two items")
    assert any("initial layout failed" in e for e in outcome.errors)
    assert outcome.created_ids == ()
    assert orch.scene.objects == {}


def test_interactive_prompt_attaches_behavior_without_spawning():
    orch = scripted_orchestrator(
        {
            "decider": [
                '{"mode": "interactive", "behavior": '
                '{"target": "mug", "kind": "grabbable", "parameters": {}}}'
            ]
        }
    )
    seed_object(orch.scene, "obj-1", "coffee mug")
    before = orch.scene.revision
    outcome = orch.handle_prompt("make the mug grabbable")
    assert outcome.created_ids == ()
    assert outcome.errors == ()
    assert len(outcome.behaviors) == 1
    assert outcome.behaviors[0].kind == "grabbable"
    assert orch.scene.revision == before + 1
    assert outcome.trace.span("behavior") is not None
    assert outcome.trace.span("spatial") is None


def test_interactive_prompt_with_missing_target_reports_not_found():
    orch = scripted_orchestrator(
        {
            "decider": [
                '{"mode": "interactive", "behavior": '
                '{"target": "unicorn", "kind": "grabbable", "parameters": {}}}'
            ]
        }
    )
    outcome = orch.handle_prompt("make the unicorn grabbable")
    assert outcome.behaviors == ()
    assert any("behavior not applied" in e for e in outcome.errors)
    assert any("no scene object matches" in e for e in outcome.errors)


def test_mixed_prompt_builds_content_then_attaches_behavior():
    script = static_script(n_objects=2)
    script["decider"] = [
        '{"mode": "static_scene", "behavior": '
        '{"target": "item1", "kind": "spawner_tool", '
        '"parameters": {"spawned_shape": "ball"}}}'
    ]
    orch = scripted_orchestrator(script)
    outcome = orch.handle_prompt("items plus a spawner")
    assert len(outcome.created_ids) == 2
    assert len(outcome.behaviors) == 1
    descriptor = outcome.behaviors[0]
    assert descriptor.kind == "spawner_tool"
    target = orch.scene.objects[descriptor.target_object_id]
    assert target.name == "item1"
    assert any("queued behavior" in e for e in outcome.trace.events)


def test_catalog_lookup_records_asset_info():
    orch = scripted_orchestrator(
        {
            **static_script(n_objects=1),
            "asset_proposal": [
                json.dumps({"objects": [{"name": "campfire", "query": "campfire"}]})
            ],
        },
        catalog=default_index(),
    )
    outcome = orch.handle_prompt("a campfire")
    obj = orch.scene.objects[outcome.created_ids[0]]
    assert obj.asset_uid == "toy/campfire"
    record = orch.asset_store.get("toy/campfire")
    assert record.download_url
    assert any("asset match" in e for e in outcome.trace.events)


# --- behaviors ---------------------------------------------------------------


def test_find_target_prefers_exact_then_unique_substring():
    scene = SceneGraph()
    seed_object(scene, "obj-1", "coffee mug")
    seed_object(scene, "obj-2", "mug")
    assert find_target_id(scene, "mug") == "obj-2"  # exact beats substring
    assert find_target_id(scene, "coffee") == "obj-1"
    assert find_target_id(scene, "the coffee mug is great") == "obj-1"


def test_find_target_breaks_ambiguity_by_lowest_id():
    scene = SceneGraph()
    seed_object(scene, "obj-1", "red tent")
    seed_object(scene, "obj-2", "blue tent")
    assert find_target_id(scene, "tent") == "obj-1"


def test_find_target_failures():
    scene = SceneGraph()
    seed_object(scene, "obj-1", "tent")
    with pytest.raises(TargetNotFound):
        find_target_id(scene, "campfire")
    with pytest.raises(TargetNotFound):
        find_target_id(scene, "   ")


def test_attach_behavior_validates_kind_and_parameters():
    scene = SceneGraph()
    seed_object(scene, "obj-1", "tent")
    ids = BehaviorIdAllocator()
    with pytest.raises(ValueError):
        attach_behavior(scene, "obj-1", "levitate", {}, ids.next_id())
    with pytest.raises(ValueError):
        attach_behavior(scene, "obj-1", "spawner_tool", {}, ids.next_id())
    with pytest.raises(TargetNotFound):
        attach_behavior(scene, "obj-404", "grabbable", {}, ids.next_id())
    before = scene.revision
    descriptor = attach_behavior(
        scene, "obj-1", "spawner_tool", {"spawned_shape": "cube"}, ids.next_id()
    )
    assert scene.revision == before + 1
    assert scene.objects["obj-1"].behaviors == (descriptor,)


def test_behavior_ids_are_unique_and_ordered():
    ids = BehaviorIdAllocator()
    assert [ids.next_id() for _ in range(3)] == ["bhv-1", "bhv-2", "bhv-3"]


# --- sketches ----------------------------------------------------------------


def test_handle_sketch_spawns_a_first_pass_object():
    orch = scripted_orchestrator(
        {"sketch_tag": ['{"tag": "campfire"}']}, catalog=default_index()
    )
    obj, match = orch.handle_sketch(b"\x89PNGsketch", owner="bob", hint="warm")
    assert obj.state is PlaceholderState.FIRST_PASS
    assert obj.name == "campfire"
    assert obj.owner == "bob"
    assert obj.asset_uid == match.hit.uid == "toy/campfire"
    assert orch.scene.objects[obj.id] is obj
    assert orch.asset_store.has("toy/campfire")


def test_handle_sketch_requires_a_catalog():
    orch = scripted_orchestrator({"sketch_tag": ['{"tag": "campfire"}']})
    with pytest.raises(EmptyCatalog):
        orch.handle_sketch(b"\x89PNGsketch")


# --- trace primitives --------------------------------------------------------


def test_stage_span_overlap_math():
    a = StageSpan("a", 0.0, 2.0)
    b = StageSpan("b", 1.0, 3.0)
    c = StageSpan("c", 2.0, 4.0)
    assert a.overlaps(b) and b.overlaps(a)
    assert not a.overlaps(c)  # touching endpoints do not overlap
    assert b.overlaps(c)
