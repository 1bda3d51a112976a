/**
 * Thin typed wrapper over the server's HTTP endpoints. Every method
 * throws {@link ApiError} with the server's detail string on non-2xx.
 */

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

export interface SceneSnapshot {
  scene: string;
  hash: string;
  revision: number;
}

export interface PromptOutcome {
  mode: string;
  created_ids: string[];
  behaviors: { behavior_id: string; kind: string; target_object_id: string }[];
  errors: string[];
  revision: number;
  hash: string;
  stages: { name: string; start: number; end: number }[];
  events: string[];
}

export interface SketchOutcome {
  object_id: string;
  tag: string;
  uid: string;
  download_url: string;
  hash: string;
}

export interface SearchHit {
  uid: string;
  caption: string;
  download_url: string;
  score: number;
}

async function parseDetail(response: Response): Promise<string> {
  try {
    const doc = await response.json();
    if (doc && typeof doc.detail === "string") return doc.detail;
    return JSON.stringify(doc);
  } catch {
    return response.statusText;
  }
}

export class Api {
  readonly baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await parseDetail(response));
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string; protocol_version: number }> {
    return this.request("/health");
  }

  createSession(): Promise<{ session_id: string; hash: string }> {
    return this.post("/sessions", {});
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request("/sessions");
  }

  getScene(sessionId: string): Promise<SceneSnapshot> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/scene`);
  }

  submitPrompt(sessionId: string, prompt: string, clientId: string): Promise<PromptOutcome> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/prompt`, {
      prompt,
      client_id: clientId,
    });
  }

  submitSketch(
    sessionId: string,
    imageB64: string,
    clientId: string,
    hint = "",
  ): Promise<SketchOutcome> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/sketch`, {
      image_b64: imageB64,
      hint,
      client_id: clientId,
    });
  }

  search(query: string, k = 5): Promise<{ hits: SearchHit[] }> {
    return this.post("/search", { query, k });
  }

  assetInfo(uid: string): Promise<Record<string, unknown>> {
    return this.request(`/asset-info/${uid}`);
  }

  /** URL of the server-rendered top-down view (cache-busted per revision). */
  renderUrl(sessionId: string, marks: boolean, revision: number): string {
    const flag = marks ? "true" : "false";
    return `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/render?marks=${flag}&rev=${revision}`;
  }

  /** ws:// or wss:// endpoint for a session's replication stream. */
  socketUrl(sessionId: string, clientId: string): string {
    const ws = this.baseUrl.replace(/^http/, "ws");
    return `${ws}/ws/${encodeURIComponent(sessionId)}/${encodeURIComponent(clientId)}`;
  }
}
