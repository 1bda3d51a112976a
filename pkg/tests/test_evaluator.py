import random

import pytest
from hypothesis import given, settings, strategies as st

from scenesmith.benchmark.dataset import BenchmarkDataset, BenchmarkScene, generate_dataset
from scenesmith.core.geometry import Vec3
from scenesmith.core.relations import SpatialRelation, SpatialRelationKind
from scenesmith.errors import MissingObject
from scenesmith.evaluator.ablation import (
    CONDITIONS,
    REFERENCE_ACCURACY,
    run_ablation,
)
from scenesmith.evaluator.metrics import check_relation, evaluate
from scenesmith.layout.solver import solve_layout
from scenesmith.reasoner.gateway import ProviderPolicy, ReasonerGateway
from scenesmith.reasoner.heuristic import HeuristicProvider

K = SpatialRelationKind

_GET = {"x": lambda v: v[0], "y": lambda v: v[1], "z": lambda v: v[2]}

_SIGN_RULE = {
    K.LEFT: ("x", -1),
    K.RIGHT: ("x", +1),
    K.FRONT: ("y", -1),
    K.BEHIND: ("y", +1),
    K.BELOW: ("z", -1),
    K.ABOVE: ("z", +1),
}


def oracle(pred, rel: SpatialRelation) -> bool:
    """Brute-force restatement of the rule: compare the raw coordinates with
    the sign each kind demands; ties satisfy nothing."""
    axis, sign = _SIGN_RULE[rel.kind]
    a = _GET[axis](pred[rel.source])
    b = _GET[axis](pred[rel.target])
    if sign < 0:
        return a < b
    return a > b


# ------------------------------------------------------------ check_relation


def test_agrees_with_sign_oracle_on_random_draws():
    rng = random.Random(20240841)
    kinds = list(K)
    for _ in range(10_000):
        # Mix continuous draws with a small integer lattice so exact ties
        # (including ties at zero) occur frequently.
        if rng.random() < 0.5:
            coords = lambda: rng.uniform(-4.0, 4.0)  # noqa: E731
        else:
            coords = lambda: float(rng.randint(-1, 1))  # noqa: E731
        pred = {
            "s": (coords(), coords(), coords()),
            "t": (coords(), coords(), coords()),
        }
        rel = SpatialRelation("s", rng.choice(kinds), "t")
        assert check_relation(pred, rel).satisfied == oracle(pred, rel)


def test_exact_ties_never_satisfy():
    pred = {"a": (1.0, 2.0, 3.0), "b": (1.0, 2.0, 3.0)}
    for kind in K:
        v = check_relation(pred, SpatialRelation("a", kind, "b"))
        assert not v.satisfied and v.delta == 0.0


def test_vec3_and_tuple_predictions_are_equivalent():
    rel = SpatialRelation("a", K.ABOVE, "b")
    as_tuple = {"a": (0.0, 0.0, 2.0), "b": (0.0, 0.0, 1.0)}
    as_vec = {"a": Vec3(0, 0, 2), "b": Vec3(0, 0, 1)}
    assert check_relation(as_tuple, rel).satisfied
    assert check_relation(as_vec, rel).satisfied


def test_missing_endpoint_raises():
    with pytest.raises(MissingObject):
        check_relation({"a": (0, 0, 0)}, SpatialRelation("a", K.LEFT, "b"))


coords_st = st.floats(min_value=-100, max_value=100, allow_nan=False)
vec_st = st.tuples(coords_st, coords_st, coords_st)


@settings(max_examples=200, deadline=None)
@given(vec_st, vec_st, st.sampled_from(list(K)))
def test_relation_and_its_inverse_agree(a, b, kind):
    pred = {"s": a, "t": b}
    forward = check_relation(pred, SpatialRelation("s", kind, "t")).satisfied
    backward = check_relation(pred, SpatialRelation("t", kind.inverse, "s")).satisfied
    assert forward == backward


# Exact-arithmetic lattice: multiples of 0.5 sum without rounding, so the
# invariance below is a true statement. Over arbitrary floats it is not —
# a sub-ulp difference (e.g. z=2.2e-16 vs 0.0) vanishes when both sides
# gain +1.0, legitimately flipping a strict comparison to a tie.
halves_st = st.integers(min_value=-200, max_value=200).map(lambda n: n / 2.0)
lattice_vec_st = st.tuples(halves_st, halves_st, halves_st)


@settings(max_examples=200, deadline=None)
@given(lattice_vec_st, lattice_vec_st, st.sampled_from(list(K)), lattice_vec_st)
def test_translation_invariance(a, b, kind, offset):
    shift = lambda v: tuple(x + o for x, o in zip(v, offset))  # noqa: E731
    rel = SpatialRelation("s", kind, "t")
    assert (
        check_relation({"s": a, "t": b}, rel).satisfied
        == check_relation({"s": shift(a), "t": shift(b)}, rel).satisfied
    )


# ------------------------------------------------------------------ evaluate


def _tiny_dataset():
    rels = (
        SpatialRelation("lamp", K.ABOVE, "rug"),
        SpatialRelation("rug", K.LEFT, "sofa"),
    )
    scene = BenchmarkScene("s-0", "d", ("lamp", "rug", "sofa"), rels)
    return BenchmarkDataset([scene])


def test_evaluate_counts_and_accuracy():
    ds = _tiny_dataset()
    preds = {"s-0": {"lamp": (0, 0, 2), "rug": (0, 0, 0), "sofa": (1, 0, 0)}}
    report = evaluate(ds, preds)
    assert (report.correct(), report.total()) == (2, 2)
    assert report.accuracy == 1.0 and report.scene_accuracy == 1.0
    assert report.per_kind["Above"] == (1, 1)
    assert report.per_kind["Right"] == (0, 0)


def test_evaluate_scene_accuracy_is_all_or_nothing():
    ds = _tiny_dataset()
    preds = {"s-0": {"lamp": (0, 0, 2), "rug": (0, 0, 0), "sofa": (-1, 0, 0)}}
    report = evaluate(ds, preds)
    assert report.accuracy == 0.5
    assert report.scene_accuracy == 0.0


def test_evaluate_missing_scene_rejected_missing_endpoint_flagged():
    ds = _tiny_dataset()
    with pytest.raises(ValueError):
        evaluate(ds, {})
    report = evaluate(ds, {"s-0": {"lamp": (0, 0, 2), "rug": (0, 0, 0)}})
    assert report.missing_endpoints == 1
    assert report.accuracy == 0.5


def test_solver_predictions_score_perfectly():
    ds = generate_dataset(25, seed=11)
    preds = {s.scene_id: solve_layout(s.objects, s.relations) for s in ds.scenes}
    assert evaluate(ds, preds).accuracy == 1.0


def test_random_baseline_near_half():
    ds = generate_dataset(150, seed=5)
    rng = random.Random(1)
    preds = {
        s.scene_id: {
            n: (rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(-8, 8))
            for n in s.objects
        }
        for s in ds.scenes
    }
    report = evaluate(ds, preds)
    assert report.total() >= 1000
    assert abs(report.accuracy - 0.5) < 0.05


# ------------------------------------------------------------------ ablation


def test_conditions_and_reference_table_constants():
    assert CONDITIONS == ("no_feedback", "text_feedback", "visual_plain", "visual_marked")
    assert REFERENCE_ACCURACY == {
        "no_feedback": 71.4,
        "text_feedback": 83.3,
        "visual_plain": 83.5,
        "visual_marked": 88.8,
    }


def _heuristic_gateway():
    return ReasonerGateway(
        {"heuristic": HeuristicProvider()}, policy=ProviderPolicy(order=("heuristic",))
    )


def test_run_ablation_emits_four_rows_with_references():
    ds = generate_dataset(2, seed=8)
    report = run_ablation(ds, _heuristic_gateway())
    assert [r.condition for r in report.rows] == list(CONDITIONS)
    assert report.provider == "heuristic"
    table = report.format_table()
    lines = table.split("\n")
    assert len(lines) == 6  # header, rule, four rows
    assert "Condition" in lines[0] and "Reference (%)" in lines[0]
    for row, ref in zip(report.rows, (71.4, 83.3, 83.5, 88.8)):
        assert row.reference == ref
        assert f"{ref:.1f}" in table


def test_run_ablation_accepts_factory_and_subset():
    ds = generate_dataset(1, seed=8)
    made = []

    def factory(condition):
        made.append(condition)
        return _heuristic_gateway()

    report = run_ablation(ds, factory, conditions=("no_feedback", "visual_marked"))
    assert made == ["no_feedback", "visual_marked"]
    assert len(report.rows) == 2


def test_run_ablation_empty_conditions():
    report = run_ablation(generate_dataset(1, seed=0), _heuristic_gateway(), conditions=())
    assert report.rows == ()
