/**
 * Client-side replica: applies broadcasts in server order.
 *
 * Transports may deliver broadcasts shuffled or duplicated; the replica
 * buffers anything early, drops anything already applied, and only ever
 * applies the message whose `server_seq` is exactly next. After the same
 * set of broadcasts reaches two replicas — in any order — their scene
 * hashes are equal. The UI never mutates the scene directly; every
 * change round-trips through the server and lands here.
 */

import { parseCanonicalScene, sceneHash } from "./canonical";
import { MessageType, MUTATING_TYPES, WireMessage, makeWireMessage } from "./protocol";
import { AssetInfoStore, applyMessage } from "./reducer";
import { SceneGraph, ValidationError } from "./scene";

export class ReplicaClient {
  readonly clientId: string;
  sessionId: string;
  scene = new SceneGraph();
  assetStore = new AssetInfoStore();

  private nextSeq = 1;
  private buffer = new Map<number, WireMessage>();
  private clientSeq = 0;

  constructor(clientId: string, sessionId = "") {
    this.clientId = clientId;
    this.sessionId = sessionId;
  }

  // --------------------------------------------------------- submitting

  nextClientSeq(): number {
    this.clientSeq += 1;
    return this.clientSeq;
  }

  makeMessage(type: MessageType, payload: Record<string, unknown>): WireMessage {
    return makeWireMessage({
      type,
      sender: this.clientId,
      session: this.sessionId,
      client_seq: this.nextClientSeq(),
      payload,
    });
  }

  // ---------------------------------------------------------- receiving

  acceptSnapshot(snapshot: WireMessage): void {
    if (snapshot.type !== "Snapshot") {
      throw new ValidationError("not a snapshot message");
    }
    if (typeof snapshot.payload.scene !== "string") {
      throw new ValidationError("snapshot payload requires canonical scene text");
    }
    this.scene = parseCanonicalScene(snapshot.payload.scene);
    this.sessionId = snapshot.session || this.sessionId;
    this.nextSeq = snapshot.server_seq + 1;
    this.buffer.clear();
  }

  /**
   * Ingest one broadcast; returns how many messages were applied.
   *
   * Early messages wait in the reorder buffer; stale duplicates are
   * dropped. Acks and errors are control traffic, not state.
   */
  receive(message: WireMessage): number {
    if (message.type === "Snapshot") {
      this.acceptSnapshot(message);
      return 1;
    }
    if (!MUTATING_TYPES.has(message.type)) {
      return 0;
    }
    const seq = message.server_seq;
    if (seq < this.nextSeq || this.buffer.has(seq)) {
      return 0; // duplicate delivery
    }
    this.buffer.set(seq, message);
    let applied = 0;
    while (this.buffer.has(this.nextSeq)) {
      const pending = this.buffer.get(this.nextSeq)!;
      this.buffer.delete(this.nextSeq);
      applyMessage(this.scene, pending, this.assetStore);
      this.nextSeq += 1;
      applied += 1;
    }
    return applied;
  }

  // --------------------------------------------------------- inspection

  appliedThrough(): number {
    return this.nextSeq - 1;
  }

  pendingCount(): number {
    return this.buffer.size;
  }

  replicaHash(): string {
    return sceneHash(this.scene);
  }
}
