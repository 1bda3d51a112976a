"""Constraint-driven integer placement.

Each of the six relation kinds is a strict inequality on one coordinate
axis, so a relation set decomposes into three independent partial orders.
Per axis we topologically sort the order graph and assign each object its
longest-path depth from the minimal elements; objects untouched by an
axis sit at 0 there. Any cyclic axis is reported as unsatisfiable along
with the offending cycle.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Sequence

from scenesmith.core.geometry import Vec3
from scenesmith.core.relations import SpatialRelation
from scenesmith.errors import Unsatisfiable

AXES = ("x", "y", "z")


def _axis_edges(relations: Iterable[SpatialRelation]) -> dict[str, set[tuple[str, str]]]:
    """Directed edges (u, v) meaning coord(u) < coord(v), grouped by axis."""
    edges: dict[str, set[tuple[str, str]]] = {a: set() for a in AXES}
    for r in relations:
        if r.kind.source_is_lesser:
            edges[r.kind.axis].add((r.source, r.target))
        else:
            edges[r.kind.axis].add((r.target, r.source))
    return edges


def _find_cycle(nodes: set[str], preds: dict[str, set[str]]) -> list[str]:
    """Walk predecessor links inside a leftover SCC until a node repeats."""
    start = min(nodes)
    path = [start]
    seen = {start}
    cur = start
    while True:
        cur = min(p for p in preds[cur] if p in nodes)
        if cur in seen:
            i = path.index(cur)
            cycle = path[i:]
            # normalize rotation so the report is stable regardless of entry
            j = cycle.index(min(cycle))
            return cycle[j:] + cycle[:j]
        seen.add(cur)
        path.append(cur)


def _axis_depths(
    axis: str, names: Sequence[str], edges: set[tuple[str, str]]
) -> dict[str, int]:
    preds: dict[str, set[str]] = {n: set() for n in names}
    succs: dict[str, set[str]] = {n: set() for n in names}
    for u, v in edges:
        preds[v].add(u)
        succs[u].add(v)
    indeg = {n: len(preds[n]) for n in names}
    ready = [n for n in names if indeg[n] == 0]
    heapq.heapify(ready)
    depth = {}
    while ready:
        n = heapq.heappop(ready)
        depth[n] = max((depth[p] + 1 for p in preds[n]), default=0)
        for s in sorted(succs[n]):
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(ready, s)
    if len(depth) != len(names):
        leftover = {n for n in names if n not in depth}
        raise Unsatisfiable(axis, _find_cycle(leftover, preds))
    return depth


def solve_layout(
    objects: Sequence[str], relations: Iterable[SpatialRelation]
) -> dict[str, Vec3]:
    """Integer positions satisfying every relation, or raise Unsatisfiable.

    All strict inequalities hold with a margin of at least 1 scene unit.
    Objects no relation mentions land at the origin of each axis.
    """
    relations = list(relations)
    names = sorted(set(objects) | {r.source for r in relations} | {r.target for r in relations})
    edges = _axis_edges(relations)
    coords = {a: _axis_depths(a, names, edges[a]) for a in AXES}
    return {
        n: Vec3(float(coords["x"][n]), float(coords["y"][n]), float(coords["z"][n]))
        for n in names
    }
