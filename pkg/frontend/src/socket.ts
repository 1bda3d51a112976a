/**
 * WebSocket session: one socket, one replica, no optimistic updates.
 *
 * The server answers a join with a Snapshot, then streams broadcasts in
 * server order. Submissions are answered with a direct Ack/Error reply
 * (matched here by `client_seq`), and accepted mutations additionally
 * come back as broadcasts — including to the sender, whose replica only
 * changes when that broadcast arrives.
 */

import { WireMessage, messageFromJson, messageToJson, MessageType } from "./protocol";
import { ReplicaClient } from "./replica";

/** Structural subset of the browser WebSocket that `ws` also satisfies. */
export interface WebSocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

export type SessionEvent =
  | { kind: "snapshot"; message: WireMessage }
  | { kind: "apply"; message: WireMessage; applied: number }
  | { kind: "status"; message: WireMessage }
  | { kind: "server-error"; message: WireMessage }
  | { kind: "closed" };

export interface SessionSocketOptions {
  url: string;
  clientId: string;
  sessionId: string;
  onEvent?: (event: SessionEvent) => void;
  /** Override in Node tests; defaults to the browser's WebSocket. */
  webSocket?: WebSocketFactory;
}

interface PendingReply {
  resolve: (reply: WireMessage) => void;
  reject: (err: Error) => void;
}

export class SessionSocket {
  readonly replica: ReplicaClient;
  /** Hash the server last stated for its own scene, if any. */
  serverHash: string | null = null;

  private ws: WebSocketLike;
  private pending = new Map<number, PendingReply>();
  private onEvent: (event: SessionEvent) => void;
  private closed = false;

  private constructor(opts: SessionSocketOptions, ws: WebSocketLike) {
    this.replica = new ReplicaClient(opts.clientId, opts.sessionId);
    this.onEvent = opts.onEvent ?? (() => undefined);
    this.ws = ws;
  }

  /**
   * Open the socket and resolve once the join Snapshot has been applied
   * to the replica; reject if the server answers with an Error frame
   * (unknown session, duplicate client id) or the socket closes first.
   */
  static connect(opts: SessionSocketOptions): Promise<SessionSocket> {
    const factory: WebSocketFactory =
      opts.webSocket ??
      ((url) => new (globalThis as { WebSocket: new (u: string) => WebSocketLike }).WebSocket(url));
    const ws = factory(opts.url);
    const socket = new SessionSocket(opts, ws);
    return new Promise((resolve, reject) => {
      let joined = false;
      ws.onmessage = (ev) => {
        const message = messageFromJson(String(ev.data));
        if (!joined) {
          if (message.type === "Snapshot") {
            socket.replica.acceptSnapshot(message);
            socket.serverHash = String(message.payload.hash ?? "");
            joined = true;
            ws.onmessage = (next) => socket.handleText(String(next.data));
            resolve(socket);
          } else if (message.type === "Error") {
            reject(new Error(String(message.payload.detail ?? message.payload.error)));
          }
          return;
        }
      };
      ws.onerror = () => {
        if (!joined) reject(new Error("socket error before join completed"));
      };
      ws.onclose = () => {
        socket.closed = true;
        socket.failPending(new Error("socket closed"));
        socket.onEvent({ kind: "closed" });
        if (!joined) reject(new Error("socket closed before join completed"));
      };
    });
  }

  private handleText(text: string): void {
    let message: WireMessage;
    try {
      message = messageFromJson(text);
    } catch {
      return; // not ours to diagnose; the server names protocol errors explicitly
    }
    switch (message.type) {
      case "Snapshot": {
        this.replica.acceptSnapshot(message);
        this.serverHash = String(message.payload.hash ?? "");
        this.onEvent({ kind: "snapshot", message });
        return;
      }
      case "Ack": {
        const seq = message.payload.client_seq;
        if (typeof seq === "number" && this.pending.has(seq)) {
          this.pending.get(seq)!.resolve(message);
          this.pending.delete(seq);
        }
        if (typeof message.payload.hash === "string") {
          this.serverHash = message.payload.hash;
        }
        this.onEvent({ kind: "status", message });
        return;
      }
      case "Error": {
        const seq = message.payload.client_seq;
        if (typeof seq === "number" && this.pending.has(seq)) {
          this.pending.get(seq)!.resolve(message);
          this.pending.delete(seq);
        }
        this.onEvent({ kind: "server-error", message });
        return;
      }
      default: {
        const applied = this.replica.receive(message);
        this.onEvent({ kind: "apply", message, applied });
      }
    }
  }

  /**
   * Submit one mutating message; resolves with the server's direct reply
   * (an Ack on acceptance, an Error frame on rejection — the caller
   * inspects `reply.type`).
   */
  submit(type: MessageType, payload: Record<string, unknown>): Promise<WireMessage> {
    if (this.closed) {
      return Promise.reject(new Error("socket closed"));
    }
    const message = this.replica.makeMessage(type, payload);
    return new Promise((resolve, reject) => {
      this.pending.set(message.client_seq, { resolve, reject });
      this.ws.send(messageToJson(message));
    });
  }

  private failPending(err: Error): void {
    for (const waiter of this.pending.values()) {
      waiter.reject(err);
    }
    this.pending.clear();
  }

  close(): void {
    this.closed = true;
    this.ws.close();
  }
}
