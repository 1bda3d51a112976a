import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from scenesmith.benchmark import grammar
from scenesmith.benchmark.dataset import (
    REFERENCE_SCENES,
    REFERENCE_STATS,
    BenchmarkDataset,
    BenchmarkScene,
    build_reference_dataset,
    dataset_stats,
    extract_relations,
    generate_dataset,
    generate_descriptions,
    load_dataset,
    load_reference_dataset,
    reference_dataset_path,
    save_dataset,
)
from scenesmith.core.relations import SpatialRelation, SpatialRelationKind
from scenesmith.errors import ExtractionFailed, Unsatisfiable
from scenesmith.layout.solver import solve_layout

K = SpatialRelationKind


# ----------------------------------------------------------------- grammar


def test_sentence_phrasing_covers_all_kinds():
    for kind in K:
        text = grammar.sentence(SpatialRelation("lamp", kind, "rug"))
        assert text.startswith("The lamp is ") and text.endswith("the rug.")
        assert grammar.extract_relations(text) == (SpatialRelation("lamp", kind, "rug"),)


def test_round_trip_over_500_seeds():
    """The grammar's inverse recovers exactly the emitted relation set."""
    for seed in range(500):
        scene = grammar.generate_scene(random.Random(seed))
        recovered = grammar.extract_relations(scene.description)
        assert tuple(dict.fromkeys(recovered)) == tuple(dict.fromkeys(scene.relations)), (
            f"seed {seed} diverged"
        )


def test_generated_scenes_are_satisfiable():
    for seed in range(100):
        scene = grammar.generate_scene(random.Random(seed))
        solve_layout(scene.objects, scene.relations)  # must not raise


def test_no_transitive_inference():
    # Two stated facts stay two facts: C above A plus A above B never
    # produces (C, Above, B).
    text = "The crate is above the armchair. The armchair is above the barrel."
    rels = grammar.extract_relations(text)
    assert len(rels) == 2
    assert set(rels) == {
        SpatialRelation("crate", K.ABOVE, "armchair"),
        SpatialRelation("armchair", K.ABOVE, "barrel"),
    }
    assert SpatialRelation("crate", K.ABOVE, "barrel") not in rels


def test_no_inverse_augmentation():
    rels = grammar.extract_relations("The mug is left of the teapot.")
    assert rels == (SpatialRelation("mug", K.LEFT, "teapot"),)


def test_extraction_failure_on_relationless_text():
    assert grammar.extract_relations("A quiet meadow at dusk.") == ()
    with pytest.raises(ExtractionFailed):
        grammar.extract_relations_strict("A quiet meadow at dusk.")


def test_extraction_ignores_surrounding_prose():
    text = "Sunset light. The tent is behind the tree. Distant hills."
    assert grammar.extract_relations(text) == (
        SpatialRelation("tent", K.BEHIND, "tree"),
    )


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_generation_is_pure_in_seed(seed):
    a = grammar.generate_scene(random.Random(seed))
    b = grammar.generate_scene(random.Random(seed))
    assert a == b


# ----------------------------------------------------------------- dataset


def test_extract_relations_builds_scene():
    scene = extract_relations("The lamp is above the rug. The rug is left of the sofa.")
    assert scene.objects == ("lamp", "rug", "sofa")
    assert len(scene.relations) == 2


def test_extract_relations_requires_content():
    with pytest.raises(ExtractionFailed):
        extract_relations("   ")
    with pytest.raises(ExtractionFailed):
        extract_relations("nothing spatial here")


def test_scene_rejects_dangling_relation():
    with pytest.raises(ValueError):
        BenchmarkScene(
            "s",
            "d",
            ("lamp",),
            (SpatialRelation("lamp", K.ABOVE, "rug"),),
        )


def test_generate_descriptions_validation():
    with pytest.raises(ValueError):
        generate_descriptions(0, seed=1)
    with pytest.raises(ValueError):
        generate_descriptions(1, seed=1, source="oracle")


def test_generate_dataset_counts_and_determinism():
    a = generate_dataset(7, seed=99)
    b = generate_dataset(7, seed=99)
    assert len(a.scenes) == 7
    assert [s.description for s in a.scenes] == [s.description for s in b.scenes]
    assert a.scenes[0].scene_id == "scene-0000"


def test_save_load_round_trip(tmp_path):
    ds = generate_dataset(5, seed=3)
    path = tmp_path / "ds.jsonl"
    save_dataset(ds, path)
    back = load_dataset(path)
    assert back.scenes == ds.scenes
    # file format: one JSON object per line with sorted keys
    lines = path.read_text().strip().split("\n")
    assert len(lines) == 5
    first = json.loads(lines[0])
    assert list(first) == sorted(first)


def test_stats_count_every_kind():
    ds = generate_dataset(10, seed=1)
    stats = dataset_stats(ds)
    assert set(stats) == {k.value for k in K}
    assert sum(stats.values()) == ds.total_relations()


# --------------------------------------------------------------- reference


def test_packaged_reference_matches_committed_distribution():
    ds = load_reference_dataset()
    assert len(ds.scenes) == REFERENCE_SCENES == 75
    assert ds.total_relations() == 840
    assert dataset_stats(ds) == REFERENCE_STATS


def test_reference_build_is_reproducible_and_committed():
    rebuilt = build_reference_dataset()
    assert rebuilt.scenes == load_reference_dataset().scenes
    assert reference_dataset_path().name == "reference_dataset.jsonl"


def test_reference_scenes_are_satisfiable_and_invertible():
    ds = load_reference_dataset()
    for scene in ds.scenes:
        solve_layout(scene.objects, scene.relations)
        recovered = grammar.extract_relations(scene.description)
        assert tuple(dict.fromkeys(recovered)) == tuple(dict.fromkeys(scene.relations))
