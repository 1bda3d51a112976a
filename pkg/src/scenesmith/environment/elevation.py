"""Elevation providers for realistic terrain.

One sampling call: a provider fills a resolution x resolution grid of
heights (meters) over the square patch centered on an ElevationRef. The
built-in synthetic provider evaluates an analytic field, which gives tests
closed-form expectations; the HTTP provider targets a tile-elevation
service configured by URL + token.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import requests as http

from scenesmith.environment.heightmap import Heightmap
from scenesmith.environment.types import ElevationRef
from scenesmith.errors import ElevationUnavailable

_M_PER_DEG_LAT = 111_320.0


def _grid_latlon(ref: ElevationRef, resolution: int):
    dlat = ref.extent_m / _M_PER_DEG_LAT
    dlon = ref.extent_m / (_M_PER_DEG_LAT * max(0.01, math.cos(math.radians(ref.lat))))
    lats = np.linspace(ref.lat - dlat / 2, ref.lat + dlat / 2, resolution)
    lons = np.linspace(ref.lon - dlon / 2, ref.lon + dlon / 2, resolution)
    return np.meshgrid(lats, lons, indexing="ij")


class SyntheticElevationProvider:
    """Analytic elevation: h = field(lat_deg, lon_deg)."""

    def __init__(self, field: Callable[[float, float], float] | None = None):
        self.field = field or (lambda lat, lon: 0.0)

    def sample_grid(self, ref: ElevationRef, resolution: int) -> np.ndarray:
        lat_grid, lon_grid = _grid_latlon(ref, resolution)
        vec = np.vectorize(self.field, otypes=[np.float64])
        return vec(lat_grid, lon_grid)


class HttpElevationProvider:
    """Bulk lookup against an open-elevation-style endpoint."""

    def __init__(self, url: str, token: str = "", timeout_s: float = 30.0):
        self.url = url
        self.token = token
        self.timeout_s = timeout_s
        self._session = http.Session()

    def sample_grid(self, ref: ElevationRef, resolution: int) -> np.ndarray:
        lat_grid, lon_grid = _grid_latlon(ref, resolution)
        locations = [
            {"latitude": float(lat), "longitude": float(lon)}
            for lat, lon in zip(lat_grid.ravel(), lon_grid.ravel())
        ]
        headers = {"Authorization": f"Bearer {self.token}"} if self.token else {}
        try:
            resp = self._session.post(
                self.url,
                json={"locations": locations},
                headers=headers,
                timeout=self.timeout_s,
            )
        except http.RequestException as e:
            raise ElevationUnavailable(f"elevation request failed: {e}") from e
        if resp.status_code != 200:
            raise ElevationUnavailable(f"elevation service returned {resp.status_code}")
        try:
            results = resp.json()["results"]
            heights = np.array([r["elevation"] for r in results], dtype=np.float64)
        except (ValueError, KeyError, TypeError) as e:
            raise ElevationUnavailable(f"malformed elevation response: {e}") from e
        if heights.size != resolution * resolution:
            raise ElevationUnavailable(
                f"expected {resolution * resolution} samples, got {heights.size}"
            )
        return heights.reshape(resolution, resolution)


def heightmap_from_elevation(
    ref: ElevationRef, provider, resolution: int = 65
) -> Heightmap:
    """Sample the patch and shift heights so the minimum sits at zero."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    grid = np.asarray(provider.sample_grid(ref, resolution), dtype=np.float64)
    if grid.shape != (resolution, resolution):
        raise ElevationUnavailable(f"provider returned shape {grid.shape}")
    return Heightmap(resolution=resolution, heights=grid - grid.min())
