"""Command-line surface: exit codes, output formats, config resolution."""

import json
from pathlib import Path

import pytest

from scenesmith.cli import main
from scenesmith.config import CliConfig, build_gateway, load_config
from scenesmith.core.canonical import canonical_scene_text
from scenesmith.core.geometry import Extents, Placement, Vec3
from scenesmith.core.lifecycle import PlaceholderState
from scenesmith.core.scene import SceneGraph, SceneObject
from scenesmith.benchmark.dataset import generate_dataset, load_dataset, save_dataset
from scenesmith.layout.solver import solve_layout
from scenesmith.reasoner.fixtures import FixtureStore

DATA = Path(__file__).resolve().parent.parent / "src" / "scenesmith" / "data"


def write_predictions(dataset, path, *, perfect=True):
    doc = {}
    for scene in dataset.scenes:
        layout = solve_layout(scene.objects, scene.relations)
        doc[scene.scene_id] = {
            name: [pos.x, pos.y, pos.z] for name, pos in layout.items()
        }
    if not perfect:
        first = dataset.scenes[0]
        doc[first.scene_id] = {name: [0.0, 0.0, 0.0] for name in first.objects}
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def small_scene():
    scene = SceneGraph()
    for i, name in enumerate(["fountain", "bench"]):
        scene.add_object(
            SceneObject(
                id=f"obj-{i + 1}",
                name=name,
                extents=Extents(1.0, 1.0, 1.0),
                placement=Placement(position=Vec3(float(i * 2), 0.0, 0.0)),
                state=PlaceholderState.FINALIZED,
            )
        )
    return scene


# ------------------------------------------------------------- config


def test_load_config_defaults():
    assert load_config(None) == CliConfig()


def test_load_config_json_file(tmp_path):
    path = tmp_path / "conf.json"
    path.write_text(json.dumps({"port": 9001, "seed": 12}), encoding="utf-8")
    config = load_config(path)
    assert config.port == 9001
    assert config.seed == 12
    assert config.host == "127.0.0.1"  # untouched default


def test_load_config_yaml_file(tmp_path):
    path = tmp_path / "conf.yaml"
    path.write_text(
        "host: 0.0.0.0\nprovider_order: [fixture, heuristic]\nmax_improve_iters: 5\n",
        encoding="utf-8",
    )
    config = load_config(path)
    assert config.host == "0.0.0.0"
    assert config.provider_order == ("fixture", "heuristic")
    assert config.max_improve_iters == 5


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "conf.json"
    path.write_text(json.dumps({"prt": 9001}), encoding="utf-8")
    with pytest.raises(ValueError, match="unknown config keys"):
        load_config(path)


def test_load_config_rejects_non_mapping(tmp_path):
    path = tmp_path / "conf.json"
    path.write_text(json.dumps([1, 2, 3]), encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(path)


def test_env_overrides_beat_file_values(tmp_path, monkeypatch):
    path = tmp_path / "conf.json"
    path.write_text(json.dumps({"port": 9001, "seed": 12}), encoding="utf-8")
    monkeypatch.setenv("SCENESMITH_PORT", "7777")
    monkeypatch.setenv("SCENESMITH_RECORD_REMOTE", "yes")
    monkeypatch.setenv("SCENESMITH_MIN_COORD", "-4.5")
    monkeypatch.setenv("SCENESMITH_PROVIDER_ORDER", "heuristic,fixture")
    config = load_config(path)
    assert config.port == 7777
    assert config.seed == 12  # file value survives where env is silent
    assert config.record_remote is True
    assert config.min_coord == -4.5
    assert config.provider_order == ("heuristic", "fixture")


@pytest.mark.parametrize(
    "fields",
    [
        {"port": 0},
        {"port": 70000},
        {"max_improve_iters": 0},
        {"min_coord": 3.0, "max_coord": 3.0},
        {"provider_order": ("psychic",)},
    ],
)
def test_config_validation_rejects_bad_fields(fields):
    with pytest.raises(ValueError):
        CliConfig(**fields)


def test_build_gateway_defaults_to_heuristic_only():
    gateway = build_gateway(CliConfig())
    assert gateway.provider("heuristic") is not None
    assert gateway.provider("remote") is None
    assert gateway.provider("fixture") is None
    # "fixture" is configured in the default order but unavailable without a
    # store, so the filtered order falls back to what exists.
    assert gateway.policy.order == ("heuristic",)
    assert gateway.fixture_store is None
    assert gateway.record_remote is False


def test_build_gateway_wires_fixture_store(tmp_path):
    gateway = build_gateway(CliConfig(fixture_dir=str(tmp_path)))
    assert gateway.fixture_store is not None
    assert gateway.fixture_store.root == tmp_path
    assert gateway.policy.order == ("fixture", "heuristic")
    assert gateway.provider("fixture") is not None


def test_build_gateway_wires_remote_provider():
    config = CliConfig(
        remote_url="http://127.0.0.1:1/v1",
        remote_model="local-test",
        record_remote=True,
        provider_order=("remote", "heuristic"),
    )
    gateway = build_gateway(config)
    assert gateway.provider("remote") is not None
    assert gateway.provider("heuristic") is not None
    assert gateway.policy.order == ("remote", "heuristic")
    assert gateway.record_remote is True


# ------------------------------------------------------------- bench gen


def test_bench_gen_writes_requested_scene_count(tmp_path, capsys):
    out = tmp_path / "scenes.jsonl"
    assert main(["bench", "gen", "--scenes", "3", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3
    assert f"wrote 3 scenes to {out}" in capsys.readouterr().out
    dataset = load_dataset(out)
    assert [s.scene_id for s in dataset.scenes] == [f"scene-{i:04d}" for i in range(3)]


def test_bench_gen_streams_to_stdout(capsys):
    assert main(["bench", "gen", "--scenes", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    for line in lines:
        doc = json.loads(line)
        assert doc["scene_id"].startswith("scene-")
        assert doc["relations"]


def test_bench_gen_is_deterministic_per_seed(tmp_path):
    first = tmp_path / "a.jsonl"
    second = tmp_path / "b.jsonl"
    other = tmp_path / "c.jsonl"
    assert main(["bench", "gen", "--scenes", "25", "--seed", "5", "--out", str(first)]) == 0
    assert main(["bench", "gen", "--scenes", "25", "--seed", "5", "--out", str(second)]) == 0
    assert main(["bench", "gen", "--scenes", "25", "--seed", "6", "--out", str(other)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes() != other.read_bytes()


def test_bench_gen_config_file_seed_matches_flag(tmp_path):
    conf = tmp_path / "conf.yaml"
    conf.write_text("seed: 5\n", encoding="utf-8")
    via_flag = tmp_path / "flag.jsonl"
    via_file = tmp_path / "file.jsonl"
    assert main(["bench", "gen", "--scenes", "4", "--seed", "5", "--out", str(via_flag)]) == 0
    assert main(
        ["bench", "gen", "--scenes", "4", "--config", str(conf), "--out", str(via_file)]
    ) == 0
    assert via_flag.read_bytes() == via_file.read_bytes()


def test_bench_gen_rejects_nonpositive_scene_count(tmp_path, capsys):
    assert main(["bench", "gen", "--scenes", "0"]) == 2
    assert "--scenes must be >= 1" in capsys.readouterr().err


def test_usage_errors_exit_with_argparse_convention():
    with pytest.raises(SystemExit) as excinfo:
        main(["bench"])  # missing required subcommand
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2


# ------------------------------------------------------------- bench eval


def test_bench_eval_reports_perfect_solver_layouts(tmp_path, capsys):
    dataset = generate_dataset(4, seed=9)
    data_path = tmp_path / "scenes.jsonl"
    pred_path = tmp_path / "pred.json"
    save_dataset(dataset, data_path)
    write_predictions(dataset, pred_path)
    assert main(
        ["bench", "eval", "--dataset", str(data_path), "--predictions", str(pred_path)]
    ) == 0
    out = capsys.readouterr().out
    assert "relation accuracy: 100.0%" in out
    total = sum(len(s.relations) for s in dataset.scenes)
    assert f"({total}/{total} relations)" in out
    # one indented per-kind tally per relation kind present in the dataset
    kinds = {rel.kind.value.lower() for s in dataset.scenes for rel in s.relations}
    for kind in kinds:
        assert f"  {kind:<8}" in out


def test_bench_eval_strict_scene_headline(tmp_path, capsys):
    dataset = generate_dataset(4, seed=9)
    data_path = tmp_path / "scenes.jsonl"
    pred_path = tmp_path / "pred.json"
    save_dataset(dataset, data_path)
    write_predictions(dataset, pred_path, perfect=False)
    assert main(
        [
            "bench",
            "eval",
            "--dataset",
            str(data_path),
            "--predictions",
            str(pred_path),
            "--strict-scene",
        ]
    ) == 0
    out = capsys.readouterr().out
    assert "scene accuracy:" in out
    assert "100.0%" not in out  # the stacked-at-origin scene misses relations


def test_bench_eval_missing_dataset_fails_cleanly(tmp_path, capsys):
    pred_path = tmp_path / "pred.json"
    pred_path.write_text("{}", encoding="utf-8")
    code = main(
        [
            "bench",
            "eval",
            "--dataset",
            str(tmp_path / "nope.jsonl"),
            "--predictions",
            str(pred_path),
        ]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


# ------------------------------------------------------------- bench ablate


def test_bench_ablate_prints_four_condition_table(capsys):
    assert main(["bench", "ablate", "--scenes", "2", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    for label in ("No feedback", "Text feedback", "Visual (no marks)", "Visual + marks"):
        assert label in out
    assert "| Condition" in out
    assert "Reference (%)" in out
    assert "provider: heuristic; scenes: 2" in out


# ------------------------------------------------------------- render


def test_render_writes_png_and_legend(tmp_path, capsys):
    scene_path = tmp_path / "scene.txt"
    out_path = tmp_path / "view.png"
    scene_path.write_text(canonical_scene_text(small_scene()), encoding="utf-8")
    assert main(["render", "--scene", str(scene_path), "--out", str(out_path)]) == 0
    assert out_path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    out = capsys.readouterr().out
    assert "1: " in out and "2: " in out
    assert f"wrote {out_path}" in out


def test_render_no_marks_suppresses_legend(tmp_path, capsys):
    scene_path = tmp_path / "scene.txt"
    out_path = tmp_path / "view.png"
    scene_path.write_text(canonical_scene_text(small_scene()), encoding="utf-8")
    assert main(
        ["render", "--scene", str(scene_path), "--out", str(out_path), "--no-marks"]
    ) == 0
    out = capsys.readouterr().out
    assert "1: " not in out
    assert f"wrote {out_path}" in out


def test_render_missing_scene_file_fails_cleanly(tmp_path, capsys):
    code = main(
        [
            "render",
            "--scene",
            str(tmp_path / "ghost.txt"),
            "--out",
            str(tmp_path / "x.png"),
        ]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


# ------------------------------------------------------------- sim


def test_sim_script_replays_packaged_demo(capsys):
    script = DATA / "sim_scripts" / "demo.txt"
    assert main(["sim", "--script", str(script)]) == 0
    out = capsys.readouterr().out
    assert "converged: true" in out


def test_sim_script_missing_file_fails_cleanly(tmp_path, capsys):
    assert main(["sim", "--script", str(tmp_path / "nope.txt")]) == 1
    assert "error:" in capsys.readouterr().err


def test_sim_random_schedule_converges(capsys):
    assert main(["sim", "--random", "--clients", "3", "--ops", "25", "--seed", "11"]) == 0
    out = capsys.readouterr().out
    assert "converged: true" in out


def test_sim_requires_a_mode():
    with pytest.raises(SystemExit) as excinfo:
        main(["sim"])
    assert excinfo.value.code == 2


# ------------------------------------------------------------- fixtures


def test_fixtures_list_empty_store(tmp_path, capsys):
    assert main(["fixtures", "list", "--store", str(tmp_path)]) == 0
    assert f"0 fixture(s) in {tmp_path}" in capsys.readouterr().out


def test_fixtures_list_prints_digests(tmp_path, capsys):
    store = FixtureStore(tmp_path)
    store.put("aa" * 32, "{}")
    store.put("bb" * 32, "{}")
    assert main(["fixtures", "list", "--store", str(tmp_path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:2] == ["aa" * 32, "bb" * 32]
    assert f"2 fixture(s) in {tmp_path}" in out[2]


def test_fixtures_record_requires_remote_provider(tmp_path, capsys):
    requests_path = tmp_path / "reqs.jsonl"
    requests_path.write_text(
        json.dumps({"template_id": "decider", "variables": {"prompt": "p", "known_objects": "none"}})
        + "\n",
        encoding="utf-8",
    )
    code = main(
        [
            "fixtures",
            "record",
            "--requests",
            str(requests_path),
            "--store",
            str(tmp_path / "store"),
        ]
    )
    assert code == 2
    assert "remote provider" in capsys.readouterr().err


def test_fixtures_record_surfaces_remote_failure(tmp_path, capsys, monkeypatch):
    # Nothing listens on port 9; the remote attempt budget burns down and the
    # command reports the failure instead of crashing.
    monkeypatch.setenv("SCENESMITH_REMOTE_URL", "http://127.0.0.1:9/v1")
    requests_path = tmp_path / "reqs.jsonl"
    requests_path.write_text(
        json.dumps({"template_id": "decider", "variables": {"prompt": "p", "known_objects": "none"}})
        + "\n",
        encoding="utf-8",
    )
    code = main(
        [
            "fixtures",
            "record",
            "--requests",
            str(requests_path),
            "--store",
            str(tmp_path / "store"),
        ]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err
