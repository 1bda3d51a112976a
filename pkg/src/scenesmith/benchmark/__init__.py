"""Spatial-relation benchmark: grammar, datasets, reference fixture."""

from scenesmith.benchmark.dataset import (
    REFERENCE_SCENES,
    REFERENCE_SEED,
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
    save_dataset,
)
from scenesmith.benchmark.grammar import NOUNS, SceneDescription, generate_scene

__all__ = [
    "NOUNS",
    "REFERENCE_SCENES",
    "REFERENCE_SEED",
    "REFERENCE_STATS",
    "BenchmarkDataset",
    "BenchmarkScene",
    "SceneDescription",
    "build_reference_dataset",
    "dataset_stats",
    "extract_relations",
    "generate_dataset",
    "generate_descriptions",
    "generate_scene",
    "load_dataset",
    "load_reference_dataset",
    "save_dataset",
]
