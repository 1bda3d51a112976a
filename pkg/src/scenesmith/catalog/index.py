"""Searchable asset catalog: exact cosine scoring over embedded captions.

The index is small enough that search is a single matrix-vector product —
no approximate structures, so results are exactly reproducible. Ties on
score break by uid so orderings never depend on float argsort internals.

On-disk layout (one file):

    magic line   b"CATIDX 1\n"
    header line  JSON {"count": N, "dimension": D}
    vectors      N * D float32, little-endian, row-major
    table        JSON list of entry records (uid, caption, url, tags)

Rebuilding the index from the same entry list yields byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyCatalog
from .embedding import ToyEmbedder

_MAGIC = b"CATIDX 1\n"


@dataclass(frozen=True)
class CatalogEntry:
    """One downloadable asset: caption is what gets embedded and searched."""

    uid: str
    caption: str
    download_url: str
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.uid:
            raise ValueError("entry uid must be non-empty")
        object.__setattr__(self, "tags", tuple(self.tags))


@dataclass(frozen=True)
class SearchHit:
    uid: str
    caption: str
    download_url: str
    score: float


@dataclass
class CatalogIndex:
    dimension: int
    entries: tuple[CatalogEntry, ...]
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.vectors.shape != (len(self.entries), self.dimension):
            raise ValueError("vector block does not match entry count")

    def __len__(self) -> int:
        return len(self.entries)

    def search(self, query: str, k: int = 5) -> list[SearchHit]:
        """Top-k cosine matches for ``query``, best first.

        Exact scoring over every entry; ties resolve by uid ascending.
        """
        if not self.entries:
            raise EmptyCatalog("catalog index has no entries")
        if k < 1:
            raise ValueError("k must be >= 1")
        embedder = ToyEmbedder(self.dimension)
        q = embedder.embed(query)
        scores = self.vectors @ q
        ranked = sorted(
            range(len(self.entries)),
            key=lambda i: (-scores[i], self.entries[i].uid),
        )
        hits = []
        for i in ranked[: min(k, len(self.entries))]:
            e = self.entries[i]
            hits.append(SearchHit(e.uid, e.caption, e.download_url, float(scores[i])))
        return hits

    def save(self, path) -> None:
        header = json.dumps(
            {"count": len(self.entries), "dimension": self.dimension},
            sort_keys=True,
        ).encode("ascii")
        table = json.dumps(
            [
                {
                    "caption": e.caption,
                    "download_url": e.download_url,
                    "tags": list(e.tags),
                    "uid": e.uid,
                }
                for e in self.entries
            ],
            sort_keys=True,
            ensure_ascii=True,
            separators=(",", ":"),
        ).encode("ascii")
        packed = self.vectors.astype("<f4").tobytes()
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(header + b"\n")
            fh.write(packed)
            fh.write(table)

    @classmethod
    def load(cls, path) -> "CatalogIndex":
        with open(path, "rb") as fh:
            blob = fh.read()
        if not blob.startswith(_MAGIC):
            raise ValueError("not a catalog index file")
        rest = blob[len(_MAGIC) :]
        header_line, _, body = rest.partition(b"\n")
        header = json.loads(header_line)
        count, dim = header["count"], header["dimension"]
        vec_bytes = count * dim * 4
        vectors = np.frombuffer(body[:vec_bytes], dtype="<f4").reshape(count, dim)
        table = json.loads(body[vec_bytes:])
        entries = tuple(
            CatalogEntry(
                uid=rec["uid"],
                caption=rec["caption"],
                download_url=rec["download_url"],
                tags=tuple(rec["tags"]),
            )
            for rec in table
        )
        return cls(dimension=dim, entries=entries, vectors=vectors.astype(np.float64))


def build_index(
    records, dimension: int = 256
) -> tuple[CatalogIndex, list[str]]:
    """Embed every record's caption; returns (index, skipped_uids).

    Records with empty or whitespace-only captions cannot be embedded and
    are skipped rather than failing the whole build.
    """
    embedder = ToyEmbedder(dimension)
    kept: list[CatalogEntry] = []
    rows: list[np.ndarray] = []
    skipped: list[str] = []
    for rec in records:
        entry = rec if isinstance(rec, CatalogEntry) else CatalogEntry(
            uid=rec["uid"],
            caption=rec.get("caption", ""),
            download_url=rec.get("download_url", ""),
            tags=tuple(rec.get("tags", ())),
        )
        try:
            vec = embedder.embed(entry.caption)
        except ValueError:
            skipped.append(entry.uid)
            continue
        kept.append(entry)
        rows.append(vec)
    vectors = (
        np.stack(rows) if rows else np.zeros((0, dimension), dtype=np.float64)
    )
    # Quantize to the on-disk precision immediately so scores (and thus
    # rankings) are identical before and after a save/load round trip.
    vectors = vectors.astype("<f4").astype(np.float64)
    return CatalogIndex(dimension=dimension, entries=tuple(kept), vectors=vectors), skipped
