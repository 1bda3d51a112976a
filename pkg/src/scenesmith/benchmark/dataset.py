"""Benchmark scenes, datasets, persistence and the packaged reference set.

A dataset file is line-oriented JSON: one scene per line with fields
scene_id, description, objects, relations (relations as [source, kind,
target] triples). Stats are always recomputed from the scenes; persisted
stats are advisory.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from scenesmith.benchmark import grammar
from scenesmith.core.relations import SpatialRelation, SpatialRelationKind
from scenesmith.errors import ExtractionFailed


@dataclass(frozen=True)
class BenchmarkScene:
    scene_id: str
    description: str
    objects: tuple[str, ...]
    relations: tuple[SpatialRelation, ...]

    def __post_init__(self):
        names = set(self.objects)
        for r in self.relations:
            if r.source not in names or r.target not in names:
                raise ValueError(f"relation {r.as_triple()} references unknown object")


@dataclass
class BenchmarkDataset:
    scenes: list[BenchmarkScene] = field(default_factory=list)

    @property
    def stats(self) -> dict[str, int]:
        return dataset_stats(self)

    def total_relations(self) -> int:
        return sum(len(s.relations) for s in self.scenes)


def dataset_stats(dataset: BenchmarkDataset | list[BenchmarkScene]) -> dict[str, int]:
    """Relation counts per kind; every kind appears, zero or not."""
    scenes = dataset.scenes if isinstance(dataset, BenchmarkDataset) else dataset
    counts = {k.value: 0 for k in SpatialRelationKind}
    for scene in scenes:
        for r in scene.relations:
            counts[r.kind.value] += 1
    return counts


def generate_descriptions(count: int, seed: int, source: str = "template", gateway=None) -> list[str]:
    """Scene description texts; the template source is pure in (count, seed)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if source == "template":
        rng = random.Random(seed)
        return [grammar.generate_scene(rng).description for _ in range(count)]
    if source == "reasoner":
        from scenesmith.reasoner.gateway import build_request

        if gateway is None:
            from scenesmith.errors import AllProvidersFailed

            raise AllProvidersFailed("reasoner source requires a gateway")
        out = []
        for i in range(count):
            req = build_request("scene_gen", {"seed": str(seed + i)})
            out.append(gateway.invoke(req).parsed["description"])
        return out
    raise ValueError(f"unknown source {source!r}")


def extract_relations(description: str, scene_id: str = "scene", gateway=None) -> BenchmarkScene:
    """Parse a description into a BenchmarkScene of explicitly stated relations.

    Only stated pairs are returned — stating "C above A" and "A above B"
    never yields (C, Above, B). Duplicate statements collapse to one;
    contradictory statements are both kept (the metric can only ever score
    one of them correct). With a gateway, extraction goes through the
    structured graph_extract template; otherwise the template grammar's own
    inverse is used.
    """
    if not description.strip():
        raise ExtractionFailed("empty description")
    if gateway is not None:
        from scenesmith.reasoner.gateway import build_request

        req = build_request("graph_extract", {"description": description})
        triples = gateway.invoke(req).parsed["relations"]
        relations = tuple(SpatialRelation.from_triple(t) for t in triples)
    else:
        relations = grammar.extract_relations(description)
    relations = tuple(dict.fromkeys(relations))
    if not relations:
        raise ExtractionFailed(f"no relation phrases found in {description!r}")
    objects = tuple(sorted({n for r in relations for n in (r.source, r.target)}))
    return BenchmarkScene(scene_id, description, objects, relations)


def generate_dataset(count: int, seed: int) -> BenchmarkDataset:
    rng = random.Random(seed)
    scenes = []
    for i in range(count):
        g = grammar.generate_scene(rng)
        scenes.append(
            BenchmarkScene(f"scene-{i:04d}", g.description, g.objects, g.relations)
        )
    return BenchmarkDataset(scenes)


# ------------------------------------------------------------------ file I/O


def _write_dataset(dataset: BenchmarkDataset, f) -> None:
    for s in dataset.scenes:
        f.write(
            json.dumps(
                {
                    "scene_id": s.scene_id,
                    "description": s.description,
                    "objects": list(s.objects),
                    "relations": [list(r.as_triple()) for r in s.relations],
                },
                ensure_ascii=True,
                sort_keys=True,
            )
            + "\n"
        )


def save_dataset(dataset: BenchmarkDataset, path) -> None:
    """Write one scene per line; `path` may be a filesystem path or a text stream."""
    if hasattr(path, "write"):
        _write_dataset(dataset, path)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        _write_dataset(dataset, f)


def load_dataset(path: str | Path) -> BenchmarkDataset:
    scenes = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            scenes.append(
                BenchmarkScene(
                    d["scene_id"],
                    d["description"],
                    tuple(d["objects"]),
                    tuple(SpatialRelation.from_triple(t) for t in d["relations"]),
                )
            )
    return BenchmarkDataset(scenes)


# ------------------------------------------------- packaged reference fixture

REFERENCE_STATS = {
    "Above": 164,
    "Behind": 111,
    "Below": 161,
    "Front": 111,
    "Left": 146,
    "Right": 147,
}
REFERENCE_SCENES = 75
REFERENCE_SEED = 20240840

_KIND_ORDER = list(SpatialRelationKind)


def build_reference_dataset(seed: int = REFERENCE_SEED) -> BenchmarkDataset:
    """75 scenes / 840 relations with the reference per-kind distribution.

    Construction mirrors the template grammar (hidden per-axis orders keep
    every scene satisfiable) but draws relation kinds from a global pool so
    the aggregate distribution comes out exactly as published.
    """
    rng = random.Random(seed)
    pool = dict(REFERENCE_STATS)
    # 60 scenes of 11 relations + 15 of 12 = 840
    sizes = [12] * 15 + [11] * 60
    scenes = []
    for i, k_rels in enumerate(sizes):
        names = tuple(sorted(rng.sample(grammar.NOUNS, 8)))
        orders = {}
        for axis in ("x", "y", "z"):
            perm = list(names)
            rng.shuffle(perm)
            orders[axis] = {n: j for j, n in enumerate(perm)}
        pairs = [(a, b) for x, a in enumerate(names) for b in names[x + 1 :]]
        free = {axis: set(pairs) for axis in ("x", "y", "z")}
        relations = []
        for _ in range(k_rels):
            remaining = max(pool.values())
            kind = next(
                k for k in _KIND_ORDER if pool[k.value] == remaining and remaining > 0
            )
            pool[kind.value] -= 1
            pair = rng.choice(sorted(free[kind.axis]))
            free[kind.axis].discard(pair)
            a, b = pair
            lesser, greater = (a, b) if orders[kind.axis][a] < orders[kind.axis][b] else (b, a)
            if kind.source_is_lesser:
                relations.append(SpatialRelation(lesser, kind, greater))
            else:
                relations.append(SpatialRelation(greater, kind, lesser))
        description = " ".join(grammar.sentence(r) for r in relations)
        scenes.append(
            BenchmarkScene(f"ref-{i:04d}", description, names, tuple(relations))
        )
    assert all(v == 0 for v in pool.values())
    return BenchmarkDataset(scenes)


def reference_dataset_path() -> Path:
    return Path(__file__).resolve().parent.parent / "data" / "reference_dataset.jsonl"


def load_reference_dataset() -> BenchmarkDataset:
    return load_dataset(reference_dataset_path())
