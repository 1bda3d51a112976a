"""Command-line interface.

Exit codes: 0 success, 1 invariant violation or runtime failure,
2 usage error (argparse's convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import CliConfig, build_gateway, load_config
from .errors import SceneSmithError


def _add_config_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config", metavar="FILE", default=None, help="JSON or YAML config file"
    )
    parser.add_argument(
        "--fixtures", metavar="DIR", default=None, help="fixture store directory"
    )
    parser.add_argument("--seed", type=int, default=None, help="override config seed")


def _load(args: argparse.Namespace) -> CliConfig:
    config = load_config(args.config)
    overrides = {}
    if getattr(args, "fixtures", None):
        overrides["fixture_dir"] = args.fixtures
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if overrides:
        import dataclasses

        config = dataclasses.replace(config, **overrides)
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenesmith",
        description="Collaborative scene construction engine and benchmark tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP/WebSocket server")
    _add_config_arg(p_serve)
    p_serve.add_argument("--host", default=None)
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--static", metavar="DIR", default=None, help="frontend bundle to serve at /app")

    p_sim = sub.add_parser("sim", help="replicated-session simulation")
    _add_config_arg(p_sim)
    group = p_sim.add_mutually_exclusive_group(required=True)
    group.add_argument("--script", metavar="FILE", help="line-oriented session script")
    group.add_argument("--random", action="store_true", help="seeded random op schedule")
    p_sim.add_argument("--clients", type=int, default=3)
    p_sim.add_argument("--ops", type=int, default=50)

    p_bench = sub.add_parser("bench", help="benchmark generation and evaluation")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)

    p_gen = bench_sub.add_parser("gen", help="generate benchmark scenes")
    _add_config_arg(p_gen)
    p_gen.add_argument("--scenes", type=int, required=True)
    p_gen.add_argument("--out", metavar="FILE", default=None, help="output JSONL (default stdout)")
    p_gen.add_argument(
        "--source",
        choices=("template", "reasoner"),
        default="template",
        help="description generator",
    )

    p_eval = bench_sub.add_parser("eval", help="score predicted layouts")
    _add_config_arg(p_eval)
    p_eval.add_argument("--dataset", metavar="FILE", required=True)
    p_eval.add_argument("--predictions", metavar="FILE", required=True)
    p_eval.add_argument(
        "--strict-scene",
        action="store_true",
        help="report all-relations-per-scene accuracy as the headline metric",
    )

    p_abl = bench_sub.add_parser("ablate", help="run the feedback ablation")
    _add_config_arg(p_abl)
    p_abl.add_argument("--dataset", metavar="FILE", default=None)
    p_abl.add_argument("--scenes", type=int, default=5, help="scenes to generate when no dataset given")
    p_abl.add_argument("--max-iters", type=int, default=3)

    p_render = sub.add_parser("render", help="render a scene document to PNG")
    _add_config_arg(p_render)
    p_render.add_argument("--scene", metavar="FILE", required=True, help="canonical scene document")
    p_render.add_argument("--out", metavar="FILE", required=True)
    p_render.add_argument("--no-marks", action="store_true")

    p_fix = sub.add_parser("fixtures", help="manage recorded reasoner fixtures")
    fix_sub = p_fix.add_subparsers(dest="fixtures_command", required=True)

    p_rec = fix_sub.add_parser("record", help="run requests against the remote provider and record")
    _add_config_arg(p_rec)
    p_rec.add_argument("--requests", metavar="FILE", required=True, help="JSONL of {template_id, variables}")
    p_rec.add_argument("--store", metavar="DIR", required=True)

    p_list = fix_sub.add_parser("list", help="list recorded fixtures")
    p_list.add_argument("--store", metavar="DIR", required=True)

    return parser


# ------------------------------------------------------------- commands


def _cmd_serve(args) -> int:
    import uvicorn

    from .web.app import create_app

    config = _load(args)
    host = args.host or config.host
    port = args.port if args.port is not None else config.port
    app = create_app(config=config, static_dir=args.static)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def _cmd_sim(args) -> int:
    from .sync.sim import run_convergence_sim, run_script

    config = _load(args)
    if args.script:
        text = Path(args.script).read_text(encoding="utf-8")
        result = run_script(text)
        print(result.output())
        return 0 if result.converged else 1
    result = run_convergence_sim(
        n_clients=args.clients, n_ops=args.ops, seed=config.seed
    )
    print(result.summary())
    if not result.converged or result.ownership_violations:
        return 1
    return 0


def _cmd_bench_gen(args) -> int:
    from .benchmark.dataset import (
        BenchmarkDataset,
        extract_relations,
        generate_dataset,
        generate_descriptions,
        save_dataset,
    )

    config = _load(args)
    if args.scenes < 1:
        print("error: --scenes must be >= 1", file=sys.stderr)
        return 2
    if args.source == "template":
        dataset = generate_dataset(args.scenes, seed=config.seed)
    else:
        gateway = build_gateway(config)
        descriptions = generate_descriptions(
            args.scenes, seed=config.seed, source="reasoner", gateway=gateway
        )
        scenes = [
            extract_relations(text, scene_id=f"scene-{i:04d}")
            for i, text in enumerate(descriptions)
        ]
        dataset = BenchmarkDataset(scenes)
    if args.out:
        save_dataset(dataset, args.out)
        print(f"wrote {len(dataset.scenes)} scenes to {args.out}")
    else:
        save_dataset(dataset, sys.stdout)
    return 0


def _load_predictions(path: str):
    from .core.geometry import Vec3

    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return {
        scene_id: {name: Vec3(*coords) for name, coords in names.items()}
        for scene_id, names in doc.items()
    }


def _cmd_bench_eval(args) -> int:
    from .benchmark.dataset import load_dataset
    from .evaluator.metrics import evaluate

    dataset = load_dataset(args.dataset)
    predictions = _load_predictions(args.predictions)
    report = evaluate(dataset, predictions)
    headline = report.scene_accuracy if args.strict_scene else report.accuracy
    metric = "scene accuracy" if args.strict_scene else "relation accuracy"
    print(f"{metric}: {headline * 100.0:.1f}%  ({report.correct()}/{report.total()} relations)")
    for kind in sorted(report.per_kind):
        correct, total = report.per_kind[kind]
        print(f"  {kind.lower():<8} {correct}/{total}")
    if report.missing_endpoints:
        print(f"missing endpoints: {report.missing_endpoints}")
    return 0


def _cmd_bench_ablate(args) -> int:
    from .benchmark.dataset import generate_dataset, load_dataset
    from .evaluator.ablation import run_ablation

    config = _load(args)
    if args.dataset:
        dataset = load_dataset(args.dataset)
    else:
        dataset = generate_dataset(args.scenes, seed=config.seed)
    gateway = build_gateway(config)
    report = run_ablation(dataset, gateway, max_iters=args.max_iters)
    print(report.format_table())
    print(f"provider: {report.provider}; scenes: {len(dataset.scenes)}")
    return 0


def _cmd_render(args) -> int:
    from .core.canonical import parse_canonical_scene
    from .layout.render import render_topdown

    text = Path(args.scene).read_text(encoding="utf-8")
    scene = parse_canonical_scene(text)
    view = render_topdown(scene, marks=not args.no_marks)
    Path(args.out).write_bytes(view.image_png)
    for mark in sorted(view.legend):
        obj = scene.objects[view.legend[mark]]
        print(f"{mark}: {obj.name} ({view.legend[mark]})")
    print(f"wrote {args.out}")
    return 0


def _cmd_fixtures_record(args) -> int:
    import dataclasses

    from .reasoner.fixtures import FixtureStore
    from .reasoner.gateway import ProviderPolicy, build_request

    config = _load(args)
    if not config.remote_url:
        print(
            "error: fixtures record needs a remote provider "
            "(set remote_url in config or SCENESMITH_REMOTE_URL)",
            file=sys.stderr,
        )
        return 2
    config = dataclasses.replace(
        config, fixture_dir=args.store, record_remote=True
    )
    gateway = build_gateway(config)
    store = FixtureStore(Path(args.store))
    recorded = 0
    with Path(args.requests).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            spec = json.loads(line)
            request = build_request(spec["template_id"], spec["variables"])
            gateway.invoke(request, policy=ProviderPolicy(order=("remote",)))
            recorded += 1
    print(f"recorded {recorded} fixtures into {args.store} ({len(store)} total)")
    return 0


def _cmd_fixtures_list(args) -> int:
    from .reasoner.fixtures import FixtureStore

    store = FixtureStore(Path(args.store))
    for digest in store.digests():
        print(digest)
    print(f"{len(store)} fixture(s) in {args.store}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "sim":
            return _cmd_sim(args)
        if args.command == "bench":
            if args.bench_command == "gen":
                return _cmd_bench_gen(args)
            if args.bench_command == "eval":
                return _cmd_bench_eval(args)
            if args.bench_command == "ablate":
                return _cmd_bench_ablate(args)
        if args.command == "render":
            return _cmd_render(args)
        if args.command == "fixtures":
            if args.fixtures_command == "record":
                return _cmd_fixtures_record(args)
            if args.fixtures_command == "list":
                return _cmd_fixtures_list(args)
        parser.error(f"unhandled command {args.command}")
        return 2
    except SceneSmithError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
