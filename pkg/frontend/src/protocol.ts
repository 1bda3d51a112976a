/**
 * Wire protocol: message vocabulary, JSON bodies, and binary framing.
 *
 * Over a raw byte stream every frame is
 *
 *     4-byte big-endian body length | version byte | UTF-8 JSON body
 *
 * WebSocket transports already provide message boundaries, so there the
 * JSON body travels alone as one text frame. `server_seq` establishes
 * the total order — the server assigns it on acceptance and replicas
 * apply strictly in that order. `(sender, client_seq)` identifies a
 * submission for deduplication.
 */

import { jsonCompact } from "./jsontext";

export const PROTOCOL_VERSION = 1;
export const MAX_FRAME_BYTES = 8 * 1024 * 1024;

export const MESSAGE_TYPES = [
  "Join",
  "Snapshot",
  "SpawnPlaceholder",
  "RegisterPrefab",
  "MeshUpdate",
  "AttachBehavior",
  "PropertyRPC",
  "Despawn",
  "Ack",
  "Error",
] as const;

export type MessageType = (typeof MESSAGE_TYPES)[number];

/** The subset a client may submit; everything else is server traffic. */
export const MUTATING_TYPES: ReadonlySet<MessageType> = new Set([
  "SpawnPlaceholder",
  "RegisterPrefab",
  "MeshUpdate",
  "AttachBehavior",
  "PropertyRPC",
  "Despawn",
]);

export interface WireMessage {
  type: MessageType;
  sender: string;
  session: string;
  client_seq: number;
  server_seq: number;
  payload: Record<string, unknown>;
}

export class ProtocolError extends Error {}

function requireSeq(value: unknown, what: string): number {
  if (value === undefined) return 0;
  if (typeof value !== "number" || !Number.isInteger(value) || value < 0) {
    throw new ProtocolError(`${what} must be a non-negative integer, got ${value}`);
  }
  return value;
}

export function makeWireMessage(fields: {
  type: MessageType;
  sender: string;
  session?: string;
  client_seq?: number;
  server_seq?: number;
  payload?: Record<string, unknown>;
}): WireMessage {
  return {
    type: fields.type,
    sender: fields.sender,
    session: fields.session ?? "",
    client_seq: requireSeq(fields.client_seq, "client_seq"),
    server_seq: requireSeq(fields.server_seq, "server_seq"),
    payload: fields.payload ?? {},
  };
}

/** One compact, sorted-key, ASCII-escaped JSON document per message. */
export function messageToJson(message: WireMessage): string {
  return jsonCompact({
    client_seq: message.client_seq,
    payload: message.payload,
    sender: message.sender,
    server_seq: message.server_seq,
    session: message.session,
    type: message.type,
  });
}

export function messageFromJson(text: string): WireMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new ProtocolError(`body is not valid JSON: ${(err as Error).message}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new ProtocolError("message body must be a JSON object");
  }
  const rec = doc as Record<string, unknown>;
  const type = rec.type;
  if (typeof type !== "string" || !MESSAGE_TYPES.includes(type as MessageType)) {
    throw new ProtocolError(`unknown message type ${JSON.stringify(type)}`);
  }
  if (typeof rec.sender !== "string") {
    throw new ProtocolError("message requires a string sender");
  }
  const payload = rec.payload ?? {};
  if (typeof payload !== "object" || payload === null || Array.isArray(payload)) {
    throw new ProtocolError("payload must be a JSON object");
  }
  return {
    type: type as MessageType,
    sender: rec.sender,
    session: typeof rec.session === "string" ? rec.session : "",
    client_seq: requireSeq(rec.client_seq, "client_seq"),
    server_seq: requireSeq(rec.server_seq, "server_seq"),
    payload: payload as Record<string, unknown>,
  };
}

// ----------------------------------------------------------------- frames

const encoder = new TextEncoder();
const decoder = new TextDecoder("utf-8", { fatal: true });

export function encodeFrame(message: WireMessage): Uint8Array {
  const body = encoder.encode(messageToJson(message));
  if (1 + body.length > MAX_FRAME_BYTES) {
    throw new ProtocolError("frame exceeds maximum size");
  }
  const frame = new Uint8Array(4 + 1 + body.length);
  new DataView(frame.buffer).setUint32(0, 1 + body.length, false);
  frame[4] = PROTOCOL_VERSION;
  frame.set(body, 5);
  return frame;
}

export function decodeBody(body: Uint8Array): WireMessage {
  if (body.length === 0) {
    throw new ProtocolError("empty frame body");
  }
  if (body[0] !== PROTOCOL_VERSION) {
    throw new ProtocolError(`unsupported protocol version ${body[0]}`);
  }
  return messageFromJson(decoder.decode(body.subarray(1)));
}

/** Decode one complete frame (length prefix included). */
export function decodeFrame(frame: Uint8Array): WireMessage {
  if (frame.length < 5) {
    throw new ProtocolError("frame too short");
  }
  const length = new DataView(frame.buffer, frame.byteOffset, 4).getUint32(0, false);
  const body = frame.subarray(4);
  if (body.length !== length) {
    throw new ProtocolError("frame length mismatch");
  }
  if (length > MAX_FRAME_BYTES) {
    throw new ProtocolError(`invalid frame length ${length}`);
  }
  return decodeBody(body);
}
