"""Layout stage: proposals, solver placement, visual refinement, rendering."""

import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenesmith.core.canonical import parse_canonical_scene
from scenesmith.core.geometry import Extents, Placement, Vec3
from scenesmith.core.lifecycle import PlaceholderState
from scenesmith.core.relations import SpatialRelation
from scenesmith.core.scene import SceneGraph, SceneObject
from scenesmith.errors import AllProvidersFailed, SchemaViolation
from scenesmith.evaluator.metrics import check_relation
from scenesmith.layout.engine import (
    LayoutEngine,
    LayoutEngineConfig,
    LayoutEntry,
    LayoutProposal,
)
from scenesmith.layout.orientation import FACING_ANGLES, FacingDirection, yaw_between
from scenesmith.layout.render import render_orientation_card, render_topdown
from scenesmith.reasoner.fixtures import FixtureProvider, FixtureStore
from scenesmith.reasoner.gateway import ProviderPolicy, ReasonerGateway
from scenesmith.reasoner.scripted import ScriptedProvider

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "scenesmith" / "data" / "fixtures"


def scripted_engine(script, default=None, **config):
    provider = ScriptedProvider(script, default=default)
    gateway = ReasonerGateway(
        {"fixture": provider}, policy=ProviderPolicy(order=("fixture",))
    )
    return LayoutEngine(gateway, LayoutEngineConfig(**config)), provider


def first_pass_scene(names, xs=None):
    scene = SceneGraph()
    for i, name in enumerate(names):
        x = float(xs[i]) if xs else float(i)
        scene.add_object(
            SceneObject(
                id=f"obj-{i + 1}",
                name=name,
                extents=Extents(1.0, 1.0, 1.0),
                placement=Placement(position=Vec3(x, 0.0, 0.0)),
                state=PlaceholderState.FIRST_PASS,
            )
        )
    return scene


class CapturingProvider:
    """Scripted answers that also keep every request for inspection."""

    name = "fixture"

    def __init__(self, inner):
        self.inner = inner
        self.requests = []

    def complete(self, request):
        self.requests.append(request)
        return self.inner.complete(request)


# --- asset proposal ---------------------------------------------------------


def proposal_json(items):
    return json.dumps({"objects": items})


def test_propose_assets_expands_counts_with_suffixed_names():
    engine, _ = scripted_engine(
        {
            "asset_proposal": [
                proposal_json(
                    [
                        {"name": "chair", "query": "a wooden chair", "count": 3},
                        {"name": "table", "query": "a round table"},
                    ]
                )
            ]
        }
    )
    specs = engine.propose_assets("three chairs around a table")
    assert [s.name for s in specs] == ["chair", "chair_2", "chair_3", "table"]
    assert all(s.query == "a wooden chair" for s in specs[:3])
    assert all(s.count == 1 for s in specs)


def test_propose_assets_caps_total_at_configured_maximum():
    engine, _ = scripted_engine(
        {"asset_proposal": [proposal_json([{"name": "tree", "query": "a tree", "count": 50}])]},
        max_assets=4,
    )
    specs = engine.propose_assets("a forest")
    assert [s.name for s in specs] == ["tree", "tree_2", "tree_3", "tree_4"]


def test_propose_assets_pads_cyclically_to_requested_count():
    engine, _ = scripted_engine(
        {
            "asset_proposal": [
                proposal_json(
                    [
                        {"name": "tent", "query": "a tent"},
                        {"name": "lantern", "query": "a lantern"},
                    ]
                )
            ]
        }
    )
    specs = engine.propose_assets("campsite", requested_count=5)
    assert [s.name for s in specs] == ["tent", "lantern", "tent_2", "lantern_2", "tent_3"]


def test_propose_assets_fills_in_default_extents():
    engine, _ = scripted_engine(
        {
            "asset_proposal": [
                proposal_json(
                    [
                        {"name": "crate", "query": "a crate", "suggested_extents": [2.0, 1.0, 1.5]},
                        {"name": "rug", "query": "a rug"},
                    ]
                )
            ]
        }
    )
    crate, rug = engine.propose_assets("storage corner")
    assert crate.extents == Extents(2.0, 1.0, 1.5)
    assert rug.extents == LayoutEngineConfig().default_extents


def test_propose_assets_validates_inputs_and_empty_answers():
    engine, _ = scripted_engine({"asset_proposal": ['{"objects": []}']})
    with pytest.raises(ValueError):
        engine.propose_assets("  ")
    with pytest.raises(ValueError):
        engine.propose_assets("camp", requested_count=0)
    with pytest.raises(SchemaViolation):
        engine.propose_assets("camp")  # empty object list fails the schema


# --- initial layout ---------------------------------------------------------


def test_single_object_layout_skips_the_reasoner():
    engine, provider = scripted_engine({})  # would fail if consulted
    proposal = engine.propose_layout("a lone obelisk", ["obelisk"])
    assert provider.calls == []
    entry = proposal.entries["obelisk"]
    assert entry.position == Vec3(0.0, 0.0, 0.0)
    assert entry.extents == LayoutEngineConfig().default_extents


def test_single_object_layout_respects_suggested_extents_and_origin():
    engine, _ = scripted_engine({}, default_origin=Vec3(1.0, 2.0, 0.0))
    proposal = engine.propose_layout(
        "one statue", ["statue"], suggested={"statue": Extents(0.5, 0.5, 2.0)}
    )
    assert proposal.entries["statue"].position == Vec3(1.0, 2.0, 0.0)
    assert proposal.entries["statue"].extents == Extents(0.5, 0.5, 2.0)


def test_layout_places_every_named_object():
    answer = json.dumps(
        {
            "objects": [
                {"name": "tent", "position": [2.0, 1.0, 0.0], "yaw_deg": 270},
                {"name": "fire", "position": [-1.0, 0.5, 0.0], "extents": [0.8, 0.8, 0.5]},
            ]
        }
    )
    engine, _ = scripted_engine({"layout_initial": [answer]})
    proposal = engine.propose_layout("a camp", ["tent", "fire"])
    assert proposal.names() == ["fire", "tent"]
    assert proposal.entries["tent"].position == Vec3(2.0, 1.0, 0.0)
    assert proposal.entries["tent"].yaw_deg == 270
    assert proposal.entries["fire"].extents == Extents(0.8, 0.8, 0.5)


def test_layout_clamps_positions_into_workspace():
    answer = json.dumps(
        {
            "objects": [
                {"name": "a", "position": [99.0, -99.0, 3.0]},
                {"name": "b", "position": [0.0, 0.0, 0.0]},
            ]
        }
    )
    engine, _ = scripted_engine({"layout_initial": [answer]}, min_coord=-8.0, max_coord=8.0)
    proposal = engine.propose_layout("two things", ["a", "b"])
    assert proposal.entries["a"].position == Vec3(8.0, -8.0, 3.0)


def test_layout_missing_entry_is_a_schema_violation():
    answer = json.dumps({"objects": [{"name": "tent", "position": [0, 0, 0]}]})
    engine, _ = scripted_engine({"layout_initial": [answer]})
    with pytest.raises(SchemaViolation, match="fire"):
        engine.propose_layout("a camp", ["tent", "fire"])


def test_layout_rejects_bad_name_lists():
    engine, _ = scripted_engine({})
    with pytest.raises(ValueError):
        engine.propose_layout("d", [])
    with pytest.raises(ValueError):
        engine.propose_layout("d", ["x", "x"])


def test_layout_entry_rejects_off_grid_yaw():
    with pytest.raises(ValueError):
        LayoutEntry(extents=Extents(1, 1, 1), position=Vec3(0, 0, 0), yaw_deg=45)
    with pytest.raises(ValueError):
        LayoutProposal(entries={"": LayoutEntry(Extents(1, 1, 1), Vec3(0, 0, 0))})


def test_solver_placement_satisfies_the_requested_relations():
    engine, provider = scripted_engine({})
    relations = [
        SpatialRelation.from_triple(("lamp", "Above", "desk")),
        SpatialRelation.from_triple(("desk", "Left", "shelf")),
    ]
    proposal = engine.solve_to_proposal(["lamp", "desk", "shelf"], relations)
    assert provider.calls == []
    positions = {n: e.position for n, e in proposal.entries.items()}
    assert all(check_relation(positions, rel).satisfied for rel in relations)


# --- refinement loop --------------------------------------------------------


def update_json(moves, done):
    doc = {"done": done}
    if moves is not None:
        doc["objects"] = moves
    return json.dumps(doc)


def test_improve_applies_moves_then_retires_placeholders():
    scene = first_pass_scene(["tent", "fire"])
    engine, _ = scripted_engine(
        {
            "layout_update": [
                update_json([{"name": "tent", "position": [4.0, 4.0, 0.0]}], done=True)
            ]
        }
    )
    result = engine.improve_layout(scene, "spread out the camp")
    assert result.iterations_used == 1
    assert not result.partial
    assert result.proposal.entries["tent"].position == Vec3(4.0, 4.0, 0.0)
    assert result.proposal.entries["fire"].position == Vec3(1.0, 0.0, 0.0)
    assert all(o.state is PlaceholderState.REMOVED for o in scene.objects.values())


def test_improve_stops_at_round_budget_when_never_done():
    scene = first_pass_scene(["tent"])
    engine, provider = scripted_engine(
        {}, default=lambda req: update_json([], done=False)
    )
    result = engine.improve_layout(scene, "keep going", max_iters=3)
    assert result.iterations_used == 3
    assert provider.calls.count("layout_update") == 3
    assert not result.partial


@given(
    max_iters=st.integers(1, 4),
    done_flags=st.lists(st.booleans(), min_size=6, max_size=6),
    move_some=st.lists(st.booleans(), min_size=6, max_size=6),
)
@settings(max_examples=40, deadline=None)
def test_improve_never_exceeds_its_round_budget(max_iters, done_flags, move_some):
    scene = first_pass_scene(["a", "b"])
    rounds = iter(range(6))

    def answer(req):
        i = next(rounds)
        moves = [{"name": "a", "position": [float(i), 0.0, 0.0]}] if move_some[i] else []
        return update_json(moves, done=done_flags[i])

    engine, _ = scripted_engine({}, default=answer)
    result = engine.improve_layout(scene, "fiddle", max_iters=max_iters)
    assert 1 <= result.iterations_used <= max_iters
    if True in done_flags[:max_iters]:
        assert result.iterations_used == done_flags.index(True) + 1
    assert all(o.state is PlaceholderState.REMOVED for o in scene.objects.values())


def test_improve_clamps_moves_and_reports_them():
    scene = first_pass_scene(["tent"])
    engine, _ = scripted_engine(
        {
            "layout_update": [
                update_json([{"name": "tent", "position": [500.0, 0.0, 0.0]}], done=True)
            ]
        }
    )
    result = engine.improve_layout(scene, "push it out")
    assert result.proposal.entries["tent"].position == Vec3(8.0, 0.0, 0.0)
    assert result.clamped == ("tent",)
    assert any("clamped" in line for line in result.log)


def test_improve_ignores_moves_for_unknown_objects():
    scene = first_pass_scene(["tent"])
    engine, _ = scripted_engine(
        {
            "layout_update": [
                update_json([{"name": "ghost", "position": [1.0, 1.0, 0.0]}], done=True)
            ]
        }
    )
    result = engine.improve_layout(scene, "move what exists")
    assert result.proposal.entries["tent"].position == Vec3(0.0, 0.0, 0.0)
    assert any("unknown" in line for line in result.log)


def test_improve_marks_partial_on_provider_failure_but_still_finalizes():
    scene = first_pass_scene(["tent", "fire"])
    engine, _ = scripted_engine(
        {"layout_update": [update_json([{"name": "tent", "position": [2, 2, 0]}], done=False)]}
    )  # second round has no script -> provider failure
    result = engine.improve_layout(scene, "two rounds wanted")
    assert result.partial
    assert result.iterations_used == 1
    assert result.proposal.entries["tent"].position == Vec3(2.0, 2.0, 0.0)
    assert all(o.state is PlaceholderState.REMOVED for o in scene.objects.values())


def test_improve_validates_scene_and_arguments():
    engine, _ = scripted_engine({})
    with pytest.raises(ValueError):
        engine.improve_layout(SceneGraph(), "empty scene")
    scene = first_pass_scene(["tent"])
    with pytest.raises(ValueError):
        engine.improve_layout(scene, "bad budget", max_iters=0)
    with pytest.raises(ValueError):
        engine.improve_layout(scene, "bad mode", image_mode="sideways")
    proposed = SceneGraph()
    proposed.add_object(
        SceneObject(
            id="p-1",
            name="sketchy",
            extents=Extents(1, 1, 1),
            placement=Placement(position=Vec3(0, 0, 0)),
        )
    )
    proposed.add_object(first_pass_scene(["ok"]).objects["obj-1"])
    with pytest.raises(ValueError, match="Proposed"):
        engine.improve_layout(proposed, "unsettled scene")


def test_improve_image_modes_control_attachments_and_legend():
    captured = {}
    for mode in ("none", "plain", "marked"):
        scene = first_pass_scene(["tent", "fire"])
        inner = ScriptedProvider({}, default=lambda req: update_json([], done=True))
        provider = CapturingProvider(inner)
        gateway = ReasonerGateway(
            {"fixture": provider}, policy=ProviderPolicy(order=("fixture",))
        )
        LayoutEngine(gateway).improve_layout(scene, "look around", image_mode=mode)
        captured[mode] = provider.requests[0]

    assert captured["none"].images == ()
    assert captured["plain"].images and captured["plain"].images[0][:8] == b"\x89PNG\r\n\x1a\n"
    assert captured["marked"].images
    assert "legend: none" in captured["plain"].rendered_prompt
    assert "1=tent, 2=fire" in captured["marked"].rendered_prompt


def test_packaged_one_fix_fixture_repairs_one_relation_per_round():
    meta = json.loads((FIXTURES / "one_fix_meta.json").read_text())
    scene = parse_canonical_scene((FIXTURES / "one_fix_scene.json").read_text())
    relations = [SpatialRelation.from_triple(t) for t in meta["relations"]]

    def violated():
        positions = {o.name: o.placement.position for o in scene.objects.values()}
        return sum(
            1 for rel in relations if not check_relation(positions, rel).satisfied
        )

    counts = []
    inner = FixtureProvider(FixtureStore(FIXTURES / "one_fix"))

    class Spy:
        name = "fixture"

        def complete(self, request):
            counts.append(violated())
            return inner.complete(request)

    gateway = ReasonerGateway({"fixture": Spy()}, policy=ProviderPolicy(order=("fixture",)))
    result = LayoutEngine(gateway).improve_layout(scene, meta["description"])
    counts.append(violated())

    assert counts == meta["expected_violations_per_round"] == [3, 2, 1, 0]
    assert result.iterations_used == 3
    assert not result.partial
    # strictly decreasing: each round repaired exactly one violated relation
    assert all(a > b for a, b in zip(counts, counts[1:]))


# --- rendering --------------------------------------------------------------


def test_render_is_byte_deterministic():
    scene = first_pass_scene(["tent", "fire"], xs=[2.0, -3.0])
    a = render_topdown(scene)
    b = render_topdown(scene)
    assert a.image_png == b.image_png
    assert a.legend == b.legend == {1: "obj-1", 2: "obj-2"}
    assert a.bound == b.bound


def test_render_marks_toggle_changes_pixels_not_footprints():
    scene = first_pass_scene(["tent"])
    marked = render_topdown(scene, marks=True)
    plain = render_topdown(scene, marks=False)
    assert marked.image_png != plain.image_png
    assert plain.legend == {}
    assert plain.legend_text(scene) == ""
    assert marked.legend_text(scene) == "1=tent"


def test_render_legend_falls_back_to_ids_without_a_scene():
    scene = first_pass_scene(["tent", "fire"])
    view = render_topdown(scene)
    assert view.legend_text() == "1=obj-1, 2=obj-2"


def test_render_empty_scene_and_size_floor():
    view = render_topdown(SceneGraph())
    assert view.legend == {}
    assert view.bound == 9.0  # 8-unit default reach plus one unit of margin
    with pytest.raises(ValueError):
        render_topdown(SceneGraph(), size=32)


def test_render_bound_grows_to_cover_far_objects():
    scene = first_pass_scene(["far"], xs=[30.0])
    view = render_topdown(scene)
    assert view.bound >= 30.0


def test_orientation_card_is_deterministic_and_facing_sensitive():
    a = render_orientation_card("lamp", FacingDirection.PLUS_X)
    b = render_orientation_card("lamp", FacingDirection.PLUS_X)
    c = render_orientation_card("lamp", FacingDirection.MINUS_Y)
    assert a == b != c
    assert a[:8] == b"\x89PNG\r\n\x1a\n"


# --- orientation arithmetic -------------------------------------------------


def test_yaw_between_matches_the_angle_table():
    known = [d for d in FacingDirection if d is not FacingDirection.UNKNOWN]
    for detected in known:
        for intended in known:
            expected = (FACING_ANGLES[intended] - FACING_ANGLES[detected]) % 360
            assert yaw_between(detected, intended) == expected
    assert yaw_between(FacingDirection.MINUS_Y, FacingDirection.PLUS_X) == 90
    assert yaw_between(FacingDirection.UNKNOWN, FacingDirection.PLUS_X) == 0
    assert yaw_between(FacingDirection.PLUS_X, FacingDirection.UNKNOWN) == 0


def test_resolve_orientation_uses_the_detected_facing():
    engine, _ = scripted_engine({"orientation": ['{"facing": "MinusY"}']})
    result = engine.resolve_orientation(b"png-bytes", FacingDirection.PLUS_X, "lamp")
    assert result.detected is FacingDirection.MINUS_Y
    assert result.yaw_deg == 90
    assert not result.warning


def test_resolve_orientation_falls_back_to_zero_yaw():
    engine, _ = scripted_engine({})
    result = engine.resolve_orientation(b"png-bytes", FacingDirection.PLUS_Y, "lamp")
    assert result == (0, FacingDirection.UNKNOWN, True) or (
        result.yaw_deg == 0 and result.detected is FacingDirection.UNKNOWN and result.warning
    )
