/**
 * Top-down scene view: the ground plane drawn as boxes with the
 * wireframe lifecycle colors (red proposed, yellow first pass, green
 * finalized) and numbered marks in sorted-id order, echoing the
 * server-side renderer so both views label objects identically.
 *
 * Axis convention: +x right, +y up (front of the scene toward the
 * viewer's bottom edge). The renderer is written against a structural
 * slice of CanvasRenderingContext2D so tests can drive it headlessly.
 */

import { codePointCompare } from "./jsontext";
import { STATE_COLORS, SceneGraph, SceneObject } from "./scene";

/** The part of CanvasRenderingContext2D the renderer actually uses. */
export interface Canvas2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  textBaseline: CanvasTextBaseline;
  globalAlpha: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface ViewOptions {
  marks?: boolean;
  selectedId?: string | null;
}

export interface LegendEntry {
  mark: number;
  id: string;
  name: string;
  state: string;
  owner: string | null;
  color: string;
}

export interface Viewport {
  min: number;
  max: number;
  width: number;
  height: number;
}

const MARGIN = 28;
const BACKGROUND = "#10141a";
const GRID = "#232a33";
const AXIS = "#3d4752";

/** Ground-plane footprint (x, y spans) after scale and cardinal yaw. */
export function footprint(obj: SceneObject): [number, number] {
  const sx = obj.extents[0] * obj.placement.scale;
  const sy = obj.extents[1] * obj.placement.scale;
  return obj.placement.yaw_deg % 180 === 90 ? [sy, sx] : [sx, sy];
}

/** Square world window covering every object, with a breathing margin. */
export function computeViewport(scene: SceneGraph, width: number, height: number): Viewport {
  let extent = 12;
  for (const obj of scene.objects.values()) {
    const [fx, fy] = footprint(obj);
    const reach = Math.max(
      Math.abs(obj.placement.position[0]) + fx / 2,
      Math.abs(obj.placement.position[1]) + fy / 2,
    );
    extent = Math.max(extent, reach * 1.1);
  }
  return { min: -extent, max: extent, width, height };
}

export function worldToScreen(vp: Viewport, wx: number, wy: number): [number, number] {
  const span = vp.max - vp.min;
  const usableW = vp.width - 2 * MARGIN;
  const usableH = vp.height - 2 * MARGIN;
  const px = MARGIN + ((wx - vp.min) / span) * usableW;
  const py = vp.height - MARGIN - ((wy - vp.min) / span) * usableH;
  return [px, py];
}

export function screenToWorld(vp: Viewport, px: number, py: number): [number, number] {
  const span = vp.max - vp.min;
  const usableW = vp.width - 2 * MARGIN;
  const usableH = vp.height - 2 * MARGIN;
  const wx = vp.min + ((px - MARGIN) / usableW) * span;
  const wy = vp.min + ((vp.height - MARGIN - py) / usableH) * span;
  return [wx, wy];
}

function sortedObjects(scene: SceneGraph): SceneObject[] {
  return [...scene.objects.keys()]
    .sort(codePointCompare)
    .map((id) => scene.objects.get(id)!);
}

/** Topmost object whose footprint contains the world point, if any. */
export function hitTest(scene: SceneGraph, wx: number, wy: number): string | null {
  let hit: string | null = null;
  for (const obj of sortedObjects(scene)) {
    const [fx, fy] = footprint(obj);
    const [cx, cy] = obj.placement.position;
    if (Math.abs(wx - cx) <= fx / 2 && Math.abs(wy - cy) <= fy / 2) {
      hit = obj.id;
    }
  }
  return hit;
}

function drawGrid(ctx: Canvas2D, vp: Viewport): void {
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, vp.width, vp.height);
  const step = vp.max - vp.min > 60 ? 10 : 2;
  ctx.lineWidth = 1;
  ctx.strokeStyle = GRID;
  for (let g = Math.ceil(vp.min / step) * step; g <= vp.max; g += step) {
    const [gx0, gy0] = worldToScreen(vp, g, vp.min);
    const [gx1, gy1] = worldToScreen(vp, g, vp.max);
    ctx.beginPath();
    ctx.moveTo(gx0, gy0);
    ctx.lineTo(gx1, gy1);
    ctx.stroke();
    const [hx0, hy0] = worldToScreen(vp, vp.min, g);
    const [hx1, hy1] = worldToScreen(vp, vp.max, g);
    ctx.beginPath();
    ctx.moveTo(hx0, hy0);
    ctx.lineTo(hx1, hy1);
    ctx.stroke();
  }
  ctx.strokeStyle = AXIS;
  ctx.lineWidth = 2;
  const [ox0, oy0] = worldToScreen(vp, vp.min, 0);
  const [ox1, oy1] = worldToScreen(vp, vp.max, 0);
  ctx.beginPath();
  ctx.moveTo(ox0, oy0);
  ctx.lineTo(ox1, oy1);
  ctx.stroke();
  const [vx0, vy0] = worldToScreen(vp, 0, vp.min);
  const [vx1, vy1] = worldToScreen(vp, 0, vp.max);
  ctx.beginPath();
  ctx.moveTo(vx0, vy0);
  ctx.lineTo(vx1, vy1);
  ctx.stroke();
  ctx.fillStyle = AXIS;
  ctx.font = "11px ui-monospace, monospace";
  ctx.textAlign = "left";
  ctx.textBaseline = "middle";
  ctx.fillText("+x", vp.width - MARGIN + 6, oy1);
  ctx.textAlign = "center";
  ctx.fillText("+y", vx1, MARGIN - 12);
}

/**
 * Draw the scene and return the legend (mark numbers in sorted-id
 * order, the same numbering the server's renders use).
 */
export function renderTopdown(
  ctx: Canvas2D,
  scene: SceneGraph,
  width: number,
  height: number,
  opts: ViewOptions = {},
): LegendEntry[] {
  const vp = computeViewport(scene, width, height);
  drawGrid(ctx, vp);

  const legend: LegendEntry[] = [];
  const objects = sortedObjects(scene);
  const unit = (width - 2 * MARGIN) / (vp.max - vp.min);

  objects.forEach((obj, index) => {
    const color = STATE_COLORS[obj.state] ?? "#888888";
    const [fx, fy] = footprint(obj);
    const [cx, cy] = obj.placement.position;
    const [px, py] = worldToScreen(vp, cx - fx / 2, cy + fy / 2);
    const w = fx * unit;
    const h = fy * unit;

    const filled = obj.state === "Finalized" || obj.state === "Removed";
    ctx.lineWidth = obj.id === opts.selectedId ? 4 : 2;
    ctx.strokeStyle = color;
    if (filled) {
      ctx.globalAlpha = 0.35;
      ctx.fillStyle = color;
      ctx.fillRect(px, py, w, h);
      ctx.globalAlpha = 1;
    }
    ctx.strokeRect(px, py, w, h);

    if (opts.marks !== false) {
      const mark = index + 1;
      const r = 9;
      ctx.beginPath();
      ctx.arc(px + w, py, r, 0, Math.PI * 2);
      ctx.fillStyle = "#ffffff";
      ctx.fill();
      ctx.strokeStyle = "#000000";
      ctx.lineWidth = 1.5;
      ctx.stroke();
      ctx.fillStyle = "#000000";
      ctx.font = "11px ui-monospace, monospace";
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(String(mark), px + w, py);
    }

    legend.push({
      mark: index + 1,
      id: obj.id,
      name: obj.name,
      state: obj.state,
      owner: obj.owner,
      color,
    });
  });

  return legend;
}
