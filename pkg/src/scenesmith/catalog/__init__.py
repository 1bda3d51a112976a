"""Asset catalog: embeddings, exact search index, info store, sketch lookup."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from .embedding import DIMENSION, ToyEmbedder
from .index import CatalogEntry, CatalogIndex, SearchHit, build_index
from .sketch import SketchMatch, sketch_to_asset, tag_sketch
from .store import AssetInfoRecord, AssetInfoStore

_DATA = Path(__file__).resolve().parent.parent / "data"


def toy_catalog_path() -> Path:
    return _DATA / "toy_catalog.json"


def load_toy_entries() -> list[CatalogEntry]:
    with open(toy_catalog_path(), "r", encoding="ascii") as fh:
        raw = json.load(fh)
    return [
        CatalogEntry(
            uid=rec["uid"],
            caption=rec["caption"],
            download_url=rec["download_url"],
            tags=tuple(rec["tags"]),
        )
        for rec in raw
    ]


@lru_cache(maxsize=1)
def default_index() -> CatalogIndex:
    index, skipped = build_index(load_toy_entries(), dimension=DIMENSION)
    if skipped:  # packaged data must always embed cleanly
        raise ValueError(f"packaged catalog has unembeddable entries: {skipped}")
    return index


__all__ = [
    "DIMENSION",
    "ToyEmbedder",
    "CatalogEntry",
    "CatalogIndex",
    "SearchHit",
    "build_index",
    "SketchMatch",
    "sketch_to_asset",
    "tag_sketch",
    "AssetInfoRecord",
    "AssetInfoStore",
    "toy_catalog_path",
    "load_toy_entries",
    "default_index",
]
