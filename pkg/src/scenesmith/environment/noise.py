"""Seeded lattice gradient noise with octave summation.

Classic two-dimensional gradient noise: a shuffled permutation table hashes
lattice corners to one of eight unit-ish gradients, corner contributions are
blended with the quintic fade, and octaves stack with halved weight and
doubled frequency. The final field is min-max normalized to [0, amplitude]
exactly, which is what the terrain pipeline wants from a "height budget".
"""

from __future__ import annotations

import random

import numpy as np

from scenesmith.environment.heightmap import Heightmap
from scenesmith.environment.types import NoiseParams

_GRADS = np.array(
    [(1, 1), (-1, 1), (1, -1), (-1, -1), (1, 0), (-1, 0), (0, 1), (0, -1)],
    dtype=np.float64,
)


def _perm_table(seed: int) -> np.ndarray:
    rng = random.Random(seed)
    table = list(range(256))
    rng.shuffle(table)
    return np.array(table + table, dtype=np.int64)


def _fade(t: np.ndarray) -> np.ndarray:
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def _gradient_noise(xs: np.ndarray, ys: np.ndarray, perm: np.ndarray) -> np.ndarray:
    xi = np.floor(xs).astype(np.int64)
    yi = np.floor(ys).astype(np.int64)
    xf = xs - xi
    yf = ys - yi
    xi &= 255
    yi &= 255

    def grad_dot(hash_, dx, dy):
        g = _GRADS[hash_ & 7]
        return g[..., 0] * dx + g[..., 1] * dy

    h00 = perm[perm[xi] + yi]
    h10 = perm[perm[xi + 1] + yi]
    h01 = perm[perm[xi] + yi + 1]
    h11 = perm[perm[xi + 1] + yi + 1]

    n00 = grad_dot(h00, xf, yf)
    n10 = grad_dot(h10, xf - 1.0, yf)
    n01 = grad_dot(h01, xf, yf - 1.0)
    n11 = grad_dot(h11, xf - 1.0, yf - 1.0)

    u = _fade(xf)
    v = _fade(yf)
    top = n00 + u * (n10 - n00)
    bottom = n01 + u * (n11 - n01)
    return top + v * (bottom - top)


def generate_heightmap(params: NoiseParams, seed: int, resolution: int) -> Heightmap:
    """Deterministic heightfield; same (params, seed, resolution) -> same grid."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    coords = np.arange(resolution, dtype=np.float64)
    jj, ii = np.meshgrid(coords, coords)
    field = np.zeros((resolution, resolution), dtype=np.float64)
    for octave in range(params.octaves):
        weight = params.persistence**octave
        freq = params.frequency * (2.0**octave)
        # fresh table per octave so octaves decorrelate under one seed
        perm = _perm_table(seed * 1013 + octave)
        field += weight * _gradient_noise(jj * freq, ii * freq, perm)
    lo = field.min()
    hi = field.max()
    if params.amplitude == 0.0 or hi == lo:
        field = np.zeros_like(field)
    else:
        field = (field - lo) / (hi - lo) * params.amplitude
    return Heightmap(resolution=resolution, heights=field)
