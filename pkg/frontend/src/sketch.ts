/**
 * Freehand sketch pad. Strokes are drawn locally only so the user can
 * compose an input image; nothing here touches the scene — the PNG is
 * submitted to the server, which does the tagging and spawning.
 */

type Point = [number, number];

export class SketchPad {
  private canvas: HTMLCanvasElement;
  private ctx: CanvasRenderingContext2D;
  private strokes: Point[][] = [];
  private active: Point[] | null = null;

  constructor(canvas: HTMLCanvasElement) {
    this.canvas = canvas;
    const ctx = canvas.getContext("2d");
    if (ctx === null) {
      throw new Error("canvas 2d context unavailable");
    }
    this.ctx = ctx;
    canvas.addEventListener("pointerdown", (ev) => this.begin(ev));
    canvas.addEventListener("pointermove", (ev) => this.extend(ev));
    canvas.addEventListener("pointerup", () => this.finish());
    canvas.addEventListener("pointerleave", () => this.finish());
    this.redraw();
  }

  private point(ev: PointerEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    return [
      ((ev.clientX - rect.left) / rect.width) * this.canvas.width,
      ((ev.clientY - rect.top) / rect.height) * this.canvas.height,
    ];
  }

  private begin(ev: PointerEvent): void {
    this.active = [this.point(ev)];
    this.canvas.setPointerCapture(ev.pointerId);
  }

  private extend(ev: PointerEvent): void {
    if (this.active === null) return;
    this.active.push(this.point(ev));
    this.redraw();
  }

  private finish(): void {
    if (this.active !== null && this.active.length > 1) {
      this.strokes.push(this.active);
    }
    this.active = null;
    this.redraw();
  }

  isEmpty(): boolean {
    return this.strokes.length === 0;
  }

  clear(): void {
    this.strokes = [];
    this.active = null;
    this.redraw();
  }

  private redraw(): void {
    const { width, height } = this.canvas;
    this.ctx.fillStyle = "#ffffff";
    this.ctx.fillRect(0, 0, width, height);
    this.ctx.strokeStyle = "#1a1a1a";
    this.ctx.lineWidth = 3;
    this.ctx.lineCap = "round";
    this.ctx.lineJoin = "round";
    for (const stroke of [...this.strokes, ...(this.active ? [this.active] : [])]) {
      this.ctx.beginPath();
      this.ctx.moveTo(stroke[0][0], stroke[0][1]);
      for (let i = 1; i < stroke.length; i++) {
        this.ctx.lineTo(stroke[i][0], stroke[i][1]);
      }
      this.ctx.stroke();
    }
  }

  /** PNG bytes as base64, the `image_b64` the sketch endpoint expects. */
  toPngBase64(): string {
    return this.canvas.toDataURL("image/png").split(",")[1];
  }
}
