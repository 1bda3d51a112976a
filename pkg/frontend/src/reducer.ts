/**
 * Deterministic message application, the replica half of the convergence
 * contract: applying the same messages in the same (server_seq) order to
 * the same starting scene yields bit-identical scenes on every client
 * and the server. Everything here is a pure function of (scene, message).
 *
 * Two reserved PropertyRPC keys mutate structured fields instead of the
 * free-form property bag: `@placement` (position/yaw/scale) and `@state`
 * (placeholder lifecycle value).
 */

import { objectFromDoc } from "./canonical";
import { MUTATING_TYPES, WireMessage } from "./protocol";
import {
  Scalar,
  SceneGraph,
  SceneObject,
  ValidationError,
  makeBehavior,
  requirePlacement,
  requireState,
  validateObject,
} from "./scene";

export const RESERVED_PLACEMENT = "@placement";
export const RESERVED_STATE = "@state";

export interface AssetInfoRecord {
  uid: string;
  name: string;
  download_url: string;
  location: [number, number, number] | null;
  source: string;
}

/** Per-replica registry of downloadable asset references. */
export class AssetInfoStore {
  private records = new Map<string, AssetInfoRecord>();

  /** Insert or replace; returns true when an existing uid was replaced. */
  put(record: AssetInfoRecord): boolean {
    if (!record.uid) {
      throw new ValidationError("asset uid must be non-empty");
    }
    const replaced = this.records.has(record.uid);
    this.records.set(record.uid, record);
    return replaced;
  }

  get(uid: string): AssetInfoRecord | undefined {
    return this.records.get(uid);
  }

  size(): number {
    return this.records.size;
  }
}

function recordFromPayload(info: Record<string, unknown>): AssetInfoRecord {
  const location = info.location;
  return {
    uid: String(info.uid ?? ""),
    name: typeof info.name === "string" ? info.name : "",
    download_url: typeof info.download_url === "string" ? info.download_url : "",
    location: Array.isArray(location)
      ? [Number(location[0]), Number(location[1]), Number(location[2])]
      : null,
    source: typeof info.source === "string" ? info.source : "catalog",
  };
}

function payloadRecord(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new ValidationError(`${what} must be an object`);
  }
  return value as Record<string, unknown>;
}

function payloadObjectId(payload: Record<string, unknown>): string {
  if (typeof payload.object_id !== "string") {
    throw new ValidationError("payload requires a string object_id");
  }
  return payload.object_id;
}

/**
 * Apply one accepted message to the scene in place.
 *
 * Throws (rather than silently skipping) when the message cannot apply:
 * a replica that cannot apply an accepted message has diverged and must
 * not pretend otherwise.
 */
export function applyMessage(
  scene: SceneGraph,
  message: WireMessage,
  assetStore?: AssetInfoStore,
): void {
  const payload = message.payload;

  switch (message.type) {
    case "SpawnPlaceholder": {
      scene.addObject(objectFromDoc(payloadObjectId(payload), payload.object));
      break;
    }

    case "RegisterPrefab": {
      const obj = scene.require(payloadObjectId(payload));
      const updated: SceneObject = {
        ...obj,
        asset_uid:
          "asset_uid" in payload
            ? (payload.asset_uid as string | null)
            : obj.asset_uid,
        state: requireState("state" in payload ? payload.state : "FirstPass"),
      };
      scene.replaceObject(validateObject(updated));
      break;
    }

    case "MeshUpdate": {
      const obj = scene.require(payloadObjectId(payload));
      const info = payloadRecord(payload.asset_info, "asset_info");
      if (typeof info.uid !== "string") {
        throw new ValidationError("asset_info requires a string uid");
      }
      const state = obj.state === "Proposed" ? "FirstPass" : obj.state;
      scene.replaceObject(validateObject({ ...obj, asset_uid: info.uid, state }));
      if (assetStore !== undefined) {
        assetStore.put(recordFromPayload(info));
      }
      break;
    }

    case "AttachBehavior": {
      const objectId = payloadObjectId(payload);
      const obj = scene.require(objectId);
      const bd = payloadRecord(payload.behavior, "behavior");
      if (typeof bd.behavior_id !== "string" || typeof bd.kind !== "string") {
        throw new ValidationError("behavior requires string behavior_id and kind");
      }
      const descriptor = makeBehavior(
        bd.behavior_id,
        bd.kind,
        payloadRecord(bd.parameters ?? {}, "parameters"),
        objectId,
      );
      scene.replaceObject({ ...obj, behaviors: [...obj.behaviors, descriptor] });
      break;
    }

    case "PropertyRPC": {
      const obj = scene.require(payloadObjectId(payload));
      const key = payload.key;
      const value = payload.value;
      if (typeof key !== "string") {
        throw new ValidationError("PropertyRPC requires a string key");
      }
      if (key === RESERVED_PLACEMENT) {
        const doc = payloadRecord(value, "placement value");
        const placement = requirePlacement(
          doc.position,
          "yaw_deg" in doc ? doc.yaw_deg : obj.placement.yaw_deg,
          "scale" in doc ? doc.scale : obj.placement.scale,
        );
        scene.replaceObject({ ...obj, placement });
      } else if (key === RESERVED_STATE) {
        scene.replaceObject(validateObject({ ...obj, state: requireState(value) }));
      } else {
        const properties = { ...obj.properties, [key]: value as Scalar };
        scene.replaceObject({ ...obj, properties });
      }
      break;
    }

    case "Despawn": {
      scene.removeObject(payloadObjectId(payload));
      break;
    }

    default:
      throw new ValidationError(
        `message type ${message.type} does not mutate scene state`,
      );
  }
}

export { MUTATING_TYPES };
