/**
 * UI wiring: one session socket, one replica, and DOM panels derived
 * from them. The view never mutates the scene locally — every change is
 * a server round trip, and the hash badge makes that visible by
 * comparing the replica hash against the server's after each apply.
 */

import { Api, ApiError } from "./api";
import { SessionEvent, SessionSocket } from "./socket";
import { SketchPad } from "./sketch";
import { SceneGraph } from "./scene";
import { hitTest, renderTopdown, screenToWorld, computeViewport } from "./view";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

/** Stable per-participant color, derived from the id. */
export function ownerColor(owner: string): string {
  let h = 0;
  for (let i = 0; i < owner.length; i++) {
    h = (h * 31 + owner.charCodeAt(i)) % 360;
  }
  return `hsl(${h}deg 65% 60%)`;
}

export class App {
  private api: Api;
  private clientId: string;
  private socket: SessionSocket | null = null;
  private sketch: SketchPad;
  private selectedId: string | null = null;
  private busy = false;

  constructor(baseUrl: string) {
    this.api = new Api(baseUrl);
    this.clientId = `web-${Math.random().toString(36).slice(2, 8)}`;
    this.sketch = new SketchPad(el<HTMLCanvasElement>("sketch-pad"));
    this.bind();
  }

  private get scene(): SceneGraph | null {
    return this.socket?.replica.scene ?? null;
  }

  private bind(): void {
    el<HTMLButtonElement>("create-button").addEventListener("click", () => {
      void this.createSession();
    });
    el<HTMLButtonElement>("join-button").addEventListener("click", () => {
      const sid = el<HTMLInputElement>("session-input").value.trim();
      if (sid) void this.join(sid);
    });
    el<HTMLFormElement>("prompt-form").addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submitPrompt();
    });
    el<HTMLButtonElement>("sketch-clear").addEventListener("click", () => {
      this.sketch.clear();
    });
    el<HTMLButtonElement>("sketch-submit").addEventListener("click", () => {
      void this.submitSketch();
    });
    el<HTMLInputElement>("marks-toggle").addEventListener("change", () => {
      this.renderScene();
    });
    el<HTMLCanvasElement>("scene-view").addEventListener("click", (ev) => {
      this.selectAt(ev);
    });
  }

  async createSession(): Promise<void> {
    try {
      const created = await this.api.createSession();
      el<HTMLInputElement>("session-input").value = created.session_id;
      await this.join(created.session_id);
    } catch (err) {
      this.toast(String((err as Error).message), "error");
    }
  }

  async join(sessionId: string): Promise<void> {
    this.socket?.close();
    this.socket = null;
    try {
      this.socket = await SessionSocket.connect({
        url: this.api.socketUrl(sessionId, this.clientId),
        sessionId,
        clientId: this.clientId,
        onEvent: (event) => this.onEvent(event),
      });
      el("connection").textContent = `${sessionId} · ${this.clientId}`;
      el("connection").className = "badge ok";
      this.addHistory(`joined ${sessionId}`);
      this.refresh();
    } catch (err) {
      el("connection").textContent = "offline";
      el("connection").className = "badge bad";
      this.toast(`join failed: ${(err as Error).message}`, "error");
    }
  }

  private onEvent(event: SessionEvent): void {
    switch (event.kind) {
      case "snapshot":
        this.refresh();
        return;
      case "apply": {
        if (event.applied > 0) this.refresh();
        const who = event.message.sender;
        if (event.applied > 0 && who !== this.clientId) {
          this.addHistory(`${who}: ${event.message.type}`);
        }
        return;
      }
      case "status": {
        const stage = event.message.payload.stage;
        if (typeof stage === "string") {
          const pipeline = el("pipeline");
          pipeline.textContent = stage.replaceAll("_", " ");
          pipeline.className =
            stage === "pipeline_failed" ? "badge bad" : stage === "pipeline_complete" ? "badge ok" : "badge busy";
          if (stage === "pipeline_failed") {
            this.toast(String(event.message.payload.error ?? "pipeline failed"), "error");
          }
        }
        this.refreshHashBadge();
        return;
      }
      case "server-error":
        this.toast(
          `${event.message.payload.error}: ${event.message.payload.detail ?? ""}`,
          "error",
        );
        return;
      case "closed":
        el("connection").textContent = "offline";
        el("connection").className = "badge bad";
        return;
    }
  }

  private async submitPrompt(): Promise<void> {
    const input = el<HTMLTextAreaElement>("prompt-input");
    const prompt = input.value.trim();
    if (!prompt || this.socket === null || this.busy) return;
    this.setBusy(true);
    this.addHistory(`${this.clientId}: “${prompt}”`);
    try {
      const outcome = await this.api.submitPrompt(
        this.socket.replica.sessionId,
        prompt,
        this.clientId,
      );
      input.value = "";
      this.addHistory(
        `→ ${outcome.mode}: ${outcome.created_ids.length} object(s), revision ${outcome.revision}`,
      );
    } catch (err) {
      this.toast(this.describe(err), "error");
    } finally {
      this.setBusy(false);
    }
  }

  private async submitSketch(): Promise<void> {
    if (this.socket === null || this.busy) return;
    if (this.sketch.isEmpty()) {
      this.toast("sketch something first", "info");
      return;
    }
    this.setBusy(true);
    try {
      const hint = el<HTMLInputElement>("sketch-hint").value.trim();
      const outcome = await this.api.submitSketch(
        this.socket.replica.sessionId,
        this.sketch.toPngBase64(),
        this.clientId,
        hint,
      );
      this.addHistory(`sketch → ${outcome.tag} (${outcome.uid})`);
      this.sketch.clear();
    } catch (err) {
      this.toast(this.describe(err), "error");
    } finally {
      this.setBusy(false);
    }
  }

  private describe(err: unknown): string {
    if (err instanceof ApiError) return `${err.status}: ${err.message}`;
    return String((err as Error).message ?? err);
  }

  private setBusy(busy: boolean): void {
    this.busy = busy;
    el<HTMLButtonElement>("prompt-button").disabled = busy;
    el<HTMLButtonElement>("sketch-submit").disabled = busy;
  }

  private selectAt(ev: MouseEvent): void {
    const scene = this.scene;
    if (scene === null) return;
    const canvas = el<HTMLCanvasElement>("scene-view");
    const rect = canvas.getBoundingClientRect();
    const px = ((ev.clientX - rect.left) / rect.width) * canvas.width;
    const py = ((ev.clientY - rect.top) / rect.height) * canvas.height;
    const vp = computeViewport(scene, canvas.width, canvas.height);
    const [wx, wy] = screenToWorld(vp, px, py);
    this.selectedId = hitTest(scene, wx, wy);
    this.renderScene();
    this.renderDetails();
  }

  // ----------------------------------------------------------- rendering

  private refresh(): void {
    this.renderScene();
    this.renderLegendAndRoster();
    this.renderDetails();
    this.refreshHashBadge();
  }

  private renderScene(): void {
    const scene = this.scene;
    if (scene === null) return;
    const canvas = el<HTMLCanvasElement>("scene-view");
    const ctx = canvas.getContext("2d");
    if (ctx === null) return;
    const marks = el<HTMLInputElement>("marks-toggle").checked;
    renderTopdown(ctx, scene, canvas.width, canvas.height, {
      marks,
      selectedId: this.selectedId,
    });
    el("revision").textContent = `revision ${scene.revision}`;
  }

  private renderLegendAndRoster(): void {
    const scene = this.scene;
    if (scene === null) return;
    const legend = el("legend");
    legend.replaceChildren();
    const canvas = el<HTMLCanvasElement>("scene-view");
    const ctx = canvas.getContext("2d");
    if (ctx !== null) {
      for (const entry of renderTopdown(ctx, scene, canvas.width, canvas.height, {
        marks: el<HTMLInputElement>("marks-toggle").checked,
        selectedId: this.selectedId,
      })) {
        const li = document.createElement("li");
        const swatch = document.createElement("span");
        swatch.className = "swatch";
        swatch.style.background = entry.color;
        li.append(swatch, `${entry.mark}: ${entry.name}`);
        if (entry.owner) li.append(` · ${entry.owner}`);
        legend.append(li);
      }
    }

    const roster = el("participants");
    roster.replaceChildren();
    const everyone = new Set(scene.contributors());
    everyone.add(this.clientId);
    for (const who of [...everyone].sort()) {
      const li = document.createElement("li");
      const dot = document.createElement("span");
      dot.className = "owner-dot";
      dot.style.background = ownerColor(who);
      li.append(dot, who === this.clientId ? `${who} (you)` : who);
      roster.append(li);
    }
  }

  private renderDetails(): void {
    const details = el("details");
    const scene = this.scene;
    if (scene === null || this.selectedId === null || !scene.objects.has(this.selectedId)) {
      details.hidden = true;
      return;
    }
    const obj = scene.objects.get(this.selectedId)!;
    const lines = [
      `${obj.name} (${obj.id})`,
      `state: ${obj.state}`,
      `owner: ${obj.owner ?? "—"}`,
      `asset: ${obj.asset_uid ?? "—"}`,
      `position: [${obj.placement.position.map((c) => c.toFixed(2)).join(", ")}]`,
    ];
    if (obj.behaviors.length > 0) {
      lines.push("behaviors:");
      for (const b of obj.behaviors) {
        lines.push(`  ${b.behavior_id}: ${b.kind}`);
      }
    }
    details.textContent = lines.join("\n");
    details.hidden = false;
  }

  private refreshHashBadge(): void {
    const badge = el("hash-badge");
    if (this.socket === null) {
      badge.textContent = "";
      badge.className = "badge";
      return;
    }
    const mine = this.socket.replica.replicaHash();
    const server = this.socket.serverHash;
    const match = server !== null && mine === server;
    badge.textContent = `${mine.slice(0, 12)} ${match ? "=" : "≠"} server`;
    badge.className = match ? "badge ok" : "badge bad";
    badge.title = `replica ${mine}\nserver  ${server ?? "unknown"}`;
  }

  private addHistory(entry: string): void {
    const li = document.createElement("li");
    li.textContent = entry;
    const history = el("history");
    history.prepend(li);
    while (history.childElementCount > 40) {
      history.lastElementChild?.remove();
    }
  }

  private toast(text: string, kind: "error" | "info"): void {
    const node = document.createElement("div");
    node.className = kind === "info" ? "toast info" : "toast";
    node.textContent = text;
    el("toasts").append(node);
    setTimeout(() => node.remove(), 6000);
  }
}
