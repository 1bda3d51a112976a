"""Deterministic raster views of a scene for visual feedback loops.

The top-down view projects object footprints onto the ground plane and
stamps each one with a numbered mark; the accompanying legend maps marks
back to object ids so a reasoner's "move 3 left of 1" can be resolved.
Rendering the same scene twice yields byte-identical PNGs: only the
built-in bitmap font is used and bounds derive from scene content alone.

Screen convention: +x right, +y up (so objects "in front", which have
smaller y, sit nearer the bottom edge of the image).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

from PIL import Image, ImageDraw, ImageFont

from ..core.lifecycle import PlaceholderState
from ..core.scene import SceneGraph, SceneObject
from .orientation import FacingDirection

IMAGE_SIZE = 512
_MARGIN = 24
_STATE_COLORS = {
    "red": (204, 41, 41),
    "yellow": (194, 148, 17),
    "green": (32, 140, 60),
    None: (90, 90, 110),
}
_AXIS_COLOR = (180, 180, 190)
_GRID_COLOR = (232, 232, 238)
_BACKGROUND = (255, 255, 255)


@dataclass(frozen=True)
class MarkedRender:
    """PNG bytes plus the mark-number -> object-id legend for one view."""

    image_png: bytes
    legend: dict[int, str]
    bound: float

    def legend_text(self, scene: SceneGraph | None = None) -> str:
        """Human/reasoner-readable legend, one ``mark=name`` per entry."""
        parts = []
        for mark in sorted(self.legend):
            obj_id = self.legend[mark]
            if scene is not None and obj_id in scene.objects:
                parts.append(f"{mark}={scene.objects[obj_id].name}")
            else:
                parts.append(f"{mark}={obj_id}")
        return ", ".join(parts)


def _scene_bound(objects: list[SceneObject]) -> float:
    reach = 8.0
    for obj in objects:
        p, e = obj.placement.position, obj.extents
        reach = max(
            reach,
            abs(p.x) + e.x / 2.0,
            abs(p.y) + e.y / 2.0,
        )
    return float(math.ceil(reach + 1.0))


def _to_px(x: float, y: float, bound: float, size: int) -> tuple[float, float]:
    half = (size - 2 * _MARGIN) / 2.0
    cx = cy = size / 2.0
    return cx + (x / bound) * half, cy - (y / bound) * half


def render_topdown(
    scene: SceneGraph, size: int = IMAGE_SIZE, marks: bool = True
) -> MarkedRender:
    """Orthographic ground-plane view with numbered marks.

    Marks are consecutive integers starting at 1, assigned over objects
    in id order; the legend maps every mark to exactly one object id.
    An empty scene renders the axes alone with an empty legend. Passing
    ``marks=False`` draws footprints only (legend stays empty), used to
    compare feedback with and without object identification.
    """
    if size < 64:
        raise ValueError("render size too small to be legible")
    objects = sorted(scene.objects.values(), key=lambda o: o.id)
    bound = _scene_bound(objects)

    img = Image.new("RGB", (size, size), _BACKGROUND)
    draw = ImageDraw.Draw(img)
    font = ImageFont.load_default()

    # Unit grid (thinned for large bounds) then the two ground axes.
    step = max(1, int(bound) // 8)
    for g in range(-int(bound), int(bound) + 1, step):
        gx0, gy0 = _to_px(g, -bound, bound, size)
        gx1, gy1 = _to_px(g, bound, bound, size)
        draw.line([(gx0, gy0), (gx1, gy1)], fill=_GRID_COLOR)
        hx0, hy0 = _to_px(-bound, g, bound, size)
        hx1, hy1 = _to_px(bound, g, bound, size)
        draw.line([(hx0, hy0), (hx1, hy1)], fill=_GRID_COLOR)
    ox0, oy0 = _to_px(-bound, 0, bound, size)
    ox1, oy1 = _to_px(bound, 0, bound, size)
    draw.line([(ox0, oy0), (ox1, oy1)], fill=_AXIS_COLOR, width=2)
    vx0, vy0 = _to_px(0, -bound, bound, size)
    vx1, vy1 = _to_px(0, bound, bound, size)
    draw.line([(vx0, vy0), (vx1, vy1)], fill=_AXIS_COLOR, width=2)
    draw.text((size - _MARGIN + 4, size / 2 - 6), "+x", fill=_AXIS_COLOR, font=font)
    draw.text((size / 2 + 4, _MARGIN - 16), "+y", fill=_AXIS_COLOR, font=font)

    legend: dict[int, str] = {}
    for mark, obj in enumerate(objects, start=1):
        if marks:
            legend[mark] = obj.id
        color = _STATE_COLORS[obj.state.display_color]
        p, e = obj.placement.position, obj.extents
        # Footprint swaps x/y spans at 90/270 degrees of yaw.
        if obj.placement.yaw_deg in (90, 270):
            sx, sy = e.y, e.x
        else:
            sx, sy = e.x, e.y
        x0, y0 = _to_px(p.x - sx / 2.0, p.y + sy / 2.0, bound, size)
        x1, y1 = _to_px(p.x + sx / 2.0, p.y - sy / 2.0, bound, size)
        filled = obj.state is PlaceholderState.FINALIZED or obj.state is PlaceholderState.REMOVED
        if filled:
            fill = tuple(min(255, c + 170) for c in color)
            draw.rectangle([x0, y0, x1, y1], outline=color, fill=fill, width=2)
        else:
            draw.rectangle([x0, y0, x1, y1], outline=color, width=2)

        if marks:
            cx, cy = _to_px(p.x, p.y, bound, size)
            label = str(mark)
            tb = draw.textbbox((0, 0), label, font=font)
            tw, th = tb[2] - tb[0], tb[3] - tb[1]
            r = max(9.0, tw / 2.0 + 4.0)
            draw.ellipse([cx - r, cy - r, cx + r, cy + r], fill=(255, 255, 255), outline=(0, 0, 0), width=2)
            draw.text((cx - tw / 2.0 - tb[0], cy - th / 2.0 - tb[1]), label, fill=(0, 0, 0), font=font)

    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return MarkedRender(image_png=buf.getvalue(), legend=legend, bound=bound)


_FACING_ROT = {
    FacingDirection.PLUS_X: 0.0,
    FacingDirection.PLUS_Y: 90.0,
    FacingDirection.MINUS_X: 180.0,
    FacingDirection.MINUS_Y: 270.0,
    FacingDirection.UNKNOWN: 0.0,
}


def render_orientation_card(
    asset_name: str,
    facing: FacingDirection = FacingDirection.PLUS_X,
    size: int = 192,
) -> bytes:
    """Card showing an asset's heading as an arrow glyph, for probes.

    The arrow points along the asset's authored facing direction in the
    same top-down convention as :func:`render_topdown`.
    """
    img = Image.new("RGB", (size, size), _BACKGROUND)
    draw = ImageDraw.Draw(img)
    font = ImageFont.load_default()
    cx = cy = size / 2.0
    ang = math.radians(_FACING_ROT[facing])

    def rot(dx: float, dy: float) -> tuple[float, float]:
        rx = dx * math.cos(ang) - dy * math.sin(ang)
        ry = dx * math.sin(ang) + dy * math.cos(ang)
        return cx + rx, cy - ry  # +y up on screen

    body = size * 0.18
    draw.rectangle(
        [cx - body, cy - body, cx + body, cy + body],
        outline=(60, 60, 80),
        width=3,
    )
    tip = size * 0.34
    base = size * 0.10
    arrow = [rot(tip, 0.0), rot(base, base), rot(base, -base)]
    draw.polygon(arrow, fill=(204, 41, 41))
    if facing is FacingDirection.UNKNOWN:
        draw.text((cx - 4, cy - 6), "?", fill=(0, 0, 0), font=font)
    draw.text((6, size - 16), asset_name[:28], fill=(0, 0, 0), font=font)

    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()
