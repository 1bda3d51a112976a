"""Heightmap container and export."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Heightmap:
    resolution: int
    heights: np.ndarray  # (resolution, resolution) float64, meters, row-major

    def __post_init__(self):
        if self.heights.shape != (self.resolution, self.resolution):
            raise ValueError(
                f"heights shape {self.heights.shape} != ({self.resolution},)*2"
            )
        self.heights.setflags(write=False)

    def min(self) -> float:
        return float(self.heights.min())

    def max(self) -> float:
        return float(self.heights.max())

    def digest_bytes(self) -> bytes:
        return self.heights.tobytes()

    def sample(self, u: float, v: float) -> float:
        """Nearest-sample height at normalized coordinates u, v in [0, 1]."""
        i = min(self.resolution - 1, max(0, round(v * (self.resolution - 1))))
        j = min(self.resolution - 1, max(0, round(u * (self.resolution - 1))))
        return float(self.heights[i, j])

    def export(self, path: str | Path) -> None:
        """Write a grayscale image plus a metadata sidecar."""
        from PIL import Image

        path = Path(path)
        lo, hi = self.min(), self.max()
        span = (hi - lo) or 1.0
        gray = np.round((self.heights - lo) / span * 255).astype(np.uint8)
        Image.fromarray(gray, mode="L").save(path, format="PNG")
        meta = {
            "resolution": self.resolution,
            "min_height_m": lo,
            "max_height_m": hi,
        }
        path.with_suffix(path.suffix + ".json").write_text(
            json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8"
        )
