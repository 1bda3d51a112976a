"""Text embedding providers for catalog search.

The shipped embedder is intentionally tiny: character trigrams hashed into
a fixed number of buckets, L2-normalized. It is deterministic across runs
and platforms (crc32 is specified byte math), needs no model files, and
exercises the full search path; semantically stronger embeddings plug in
through the same two-method interface.
"""

from __future__ import annotations

import re
import zlib

import numpy as np

DIMENSION = 256


def _normalize(text: str) -> str:
    return re.sub(r"\s+", " ", text.strip().lower())


class ToyEmbedder:
    """Character-trigram hashing embedder; same string -> same unit vector."""

    def __init__(self, dimension: int = DIMENSION):
        if dimension < 8:
            raise ValueError("dimension too small")
        self.dimension = dimension

    def embed(self, text: str) -> np.ndarray:
        norm = _normalize(text)
        if not norm:
            raise ValueError("cannot embed empty text")
        padded = f"  {norm} "
        vec = np.zeros(self.dimension, dtype=np.float64)
        for i in range(len(padded) - 2):
            trigram = padded[i : i + 3].encode("utf-8")
            vec[zlib.crc32(trigram) % self.dimension] += 1.0
        length = float(np.linalg.norm(vec))
        return vec / length
