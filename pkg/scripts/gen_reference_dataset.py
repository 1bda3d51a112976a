#!/usr/bin/env python3
"""Regenerate the packaged reference benchmark dataset.

The reference set is 75 scenes / 840 relations with a fixed per-kind
distribution; the construction is fully seeded, so this script is
idempotent — rerunning it must leave the packaged file byte-identical.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from scenesmith.benchmark.dataset import (  # noqa: E402
    REFERENCE_STATS,
    build_reference_dataset,
    dataset_stats,
    reference_dataset_path,
    save_dataset,
)


def main() -> int:
    dataset = build_reference_dataset()
    stats = dataset_stats(dataset)
    assert stats == REFERENCE_STATS, f"distribution drifted: {stats}"
    assert len(dataset.scenes) == 75
    assert dataset.total_relations() == 840
    out = reference_dataset_path()
    before = out.read_bytes() if out.exists() else None
    save_dataset(dataset, out)
    after = out.read_bytes()
    changed = before is not None and before != after
    print(f"wrote {out} ({len(dataset.scenes)} scenes, {dataset.total_relations()} relations)")
    print(f"per-kind: {stats}")
    if changed:
        print("WARNING: file content changed relative to the committed version")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
