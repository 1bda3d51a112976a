/**
 * Canonical scene serialization — the client half of a cross-language
 * contract. The server hashes SHA-256 over exactly this text, so every
 * rule here (key order, 6-decimal reals, bare integers, ASCII escapes)
 * must match the server's emitter byte for byte; the committed test
 * vectors pin that equivalence.
 *
 * - JSON-shaped document, keys in sorted order, compact separators,
 *   ASCII-escaped strings.
 * - Reals are fixed to 6 decimal places with round-half-even.
 * - Integers (revision, yaw_deg, octaves, seed) are emitted bare; any
 *   number inside `properties` or behavior `parameters` is a real.
 */

import { sha256 } from "js-sha256";

import { fixed6 } from "./fixed6";
import { codePointCompare, jsonString } from "./jsontext";
import {
  BehaviorDescriptor,
  EnvironmentSpec,
  Placement,
  Scalar,
  SceneGraph,
  SceneObject,
  ValidationError,
  Vec3,
  makeBehavior,
  requireExtents,
  requirePlacement,
  requireState,
  validateObject,
} from "./scene";

const f = fixed6;
const s = jsonString;

/** Integer-valued fields print bare, with no decimal fixing. */
function bare(value: number): string {
  if (!Number.isFinite(value)) {
    throw new RangeError(`cannot serialize non-finite value ${value}`);
  }
  return Object.is(value, -0) ? "0" : String(value);
}

function scalarText(value: Scalar): string {
  if (value === null) return "null";
  switch (typeof value) {
    case "boolean":
      return value ? "true" : "false";
    case "number":
      return f(value);
    case "string":
      return s(value);
    default:
      throw new TypeError(`unsupported scalar ${typeof value}`);
  }
}

function kvMapText(map: Record<string, Scalar>): string {
  const keys = Object.keys(map).sort(codePointCompare);
  return "{" + keys.map((k) => `${s(k)}:${scalarText(map[k])}`).join(",") + "}";
}

function vecText(v: Vec3): string {
  return `[${f(v[0])},${f(v[1])},${f(v[2])}]`;
}

function behaviorText(b: BehaviorDescriptor): string {
  return (
    "{" +
    `"behavior_id":${s(b.behavior_id)},` +
    `"kind":${s(b.kind)},` +
    `"parameters":${kvMapText(b.parameters)},` +
    `"target":${s(b.target_object_id)}` +
    "}"
  );
}

function objectText(o: SceneObject): string {
  return (
    "{" +
    `"asset_uid":${o.asset_uid === null ? "null" : s(o.asset_uid)},` +
    `"behaviors":[${o.behaviors.map(behaviorText).join(",")}],` +
    `"extents":${vecText(o.extents)},` +
    `"name":${s(o.name)},` +
    `"owner":${o.owner === null ? "null" : s(o.owner)},` +
    '"placement":{' +
    `"position":${vecText(o.placement.position)},` +
    `"scale":${f(o.placement.scale)},` +
    `"yaw_deg":${bare(o.placement.yaw_deg)}` +
    "}," +
    `"properties":${kvMapText(o.properties)},` +
    `"state":${s(o.state)}` +
    "}"
  );
}

function environmentText(env: EnvironmentSpec | null): string {
  if (env === null) return "null";
  const n = env.noise;
  const noise =
    n === null
      ? "null"
      : "{" +
        `"amplitude":${f(n.amplitude)},` +
        `"frequency":${f(n.frequency)},` +
        `"octaves":${bare(n.octaves)},` +
        `"persistence":${f(n.persistence)}` +
        "}";
  const e = env.elevation_ref;
  const elevation =
    e === null
      ? "null"
      : `{"extent_m":${f(e.extent_m)},"lat":${f(e.lat)},"lon":${f(e.lon)}}`;
  return (
    "{" +
    `"elevation_ref":${elevation},` +
    `"fallbacks":[${env.fallbacks.map(s).join(",")}],` +
    `"material":${s(env.material)},` +
    `"noise":${noise},` +
    `"realism":${s(env.realism)},` +
    `"seed":${bare(env.seed)},` +
    `"skybox":${s(env.skybox)},` +
    `"terrain_kind":${s(env.terrain_kind)},` +
    `"terrain_layer":${s(env.terrain_layer)},` +
    `"water":${env.water ? "true" : "false"}` +
    "}"
  );
}

export function canonicalSceneText(scene: SceneGraph): string {
  const ids = [...scene.objects.keys()].sort(codePointCompare);
  const objects = ids.map((id) => `${s(id)}:${objectText(scene.objects.get(id)!)}`);
  return (
    "{" +
    `"environment":${environmentText(scene.environment)},` +
    `"objects":{${objects.join(",")}},` +
    `"revision":${bare(scene.revision)}` +
    "}"
  );
}

/** SHA-256 of the canonical text; what peers compare after quiescence. */
export function sceneHash(scene: SceneGraph): string {
  return sha256(canonicalSceneText(scene));
}

// --------------------------------------------------------------- wire docs

/**
 * Full-precision JSON document for one object — the wire twin of the
 * canonical form, with raw doubles instead of fixed decimals, so values
 * survive a JSON round trip bit-exactly.
 */
export function objectDoc(o: SceneObject): Record<string, unknown> {
  return {
    asset_uid: o.asset_uid,
    behaviors: o.behaviors.map((b) => ({
      behavior_id: b.behavior_id,
      kind: b.kind,
      parameters: { ...b.parameters },
      target: b.target_object_id,
    })),
    extents: [...o.extents],
    name: o.name,
    owner: o.owner,
    placement: {
      position: [...o.placement.position],
      scale: o.placement.scale,
      yaw_deg: o.placement.yaw_deg,
    },
    properties: { ...o.properties },
    state: o.state,
  };
}

function asRecord(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new ValidationError(`${what} must be an object document`);
  }
  return value as Record<string, unknown>;
}

/** Inverse of {@link objectDoc}; validates everything the server would. */
export function objectFromDoc(objectId: string, doc: unknown): SceneObject {
  const od = asRecord(doc, "object");
  const placementDoc = asRecord(od.placement, "placement");
  if (typeof od.name !== "string") {
    throw new ValidationError("object document requires a string name");
  }
  const behaviors = Array.isArray(od.behaviors)
    ? od.behaviors.map((bd) => {
        const rec = asRecord(bd, "behavior");
        if (typeof rec.behavior_id !== "string" || typeof rec.kind !== "string") {
          throw new ValidationError("behavior requires string behavior_id and kind");
        }
        if (typeof rec.target !== "string") {
          throw new ValidationError("behavior requires a string target");
        }
        return makeBehavior(
          rec.behavior_id,
          rec.kind,
          asRecord(rec.parameters, "parameters"),
          rec.target,
        );
      })
    : [];
  const placement: Placement = requirePlacement(
    placementDoc.position,
    placementDoc.yaw_deg,
    "scale" in placementDoc ? placementDoc.scale : 1.0,
  );
  const owner = "owner" in od ? od.owner : "";
  const assetUid = "asset_uid" in od ? od.asset_uid : null;
  if (owner !== null && typeof owner !== "string") {
    throw new ValidationError("owner must be a string or null");
  }
  if (assetUid !== null && typeof assetUid !== "string") {
    throw new ValidationError("asset_uid must be a string or null");
  }
  const properties: Record<string, Scalar> = {};
  if ("properties" in od && od.properties !== undefined) {
    for (const [key, value] of Object.entries(asRecord(od.properties, "properties"))) {
      properties[key] = value as Scalar;
    }
  }
  return validateObject({
    id: objectId,
    name: od.name,
    extents: requireExtents(od.extents),
    placement,
    state: requireState("state" in od ? od.state : "Proposed"),
    owner,
    asset_uid: assetUid,
    behaviors,
    properties,
  });
}

// ------------------------------------------------------------------ parse

function numberField(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new ValidationError(`${what} must be a finite number`);
  }
  return value;
}

function stringField(value: unknown, what: string): string {
  if (typeof value !== "string") {
    throw new ValidationError(`${what} must be a string`);
  }
  return value;
}

/** Rebuild a scene graph from its canonical form (inverse of the emitter). */
export function parseCanonicalScene(text: string): SceneGraph {
  const doc = asRecord(JSON.parse(text), "scene");
  const scene = new SceneGraph();
  const objectDocs = asRecord(doc.objects ?? {}, "objects");
  for (const oid of Object.keys(objectDocs).sort(codePointCompare)) {
    scene.objects.set(oid, objectFromDoc(oid, objectDocs[oid]));
  }
  if (doc.environment !== null && doc.environment !== undefined) {
    const ed = asRecord(doc.environment, "environment");
    const nd = ed.noise === null ? null : asRecord(ed.noise, "noise");
    const rd = ed.elevation_ref === null ? null : asRecord(ed.elevation_ref, "elevation_ref");
    scene.environment = {
      terrain_kind: stringField(ed.terrain_kind, "terrain_kind"),
      realism: stringField(ed.realism, "realism"),
      noise:
        nd === null
          ? null
          : {
              amplitude: numberField(nd.amplitude, "amplitude"),
              frequency: numberField(nd.frequency, "frequency"),
              octaves: numberField(nd.octaves, "octaves"),
              persistence: numberField(nd.persistence, "persistence"),
            },
      elevation_ref:
        rd === null
          ? null
          : {
              extent_m: numberField(rd.extent_m, "extent_m"),
              lat: numberField(rd.lat, "lat"),
              lon: numberField(rd.lon, "lon"),
            },
      material: stringField(ed.material, "material"),
      terrain_layer: stringField(ed.terrain_layer, "terrain_layer"),
      skybox: stringField(ed.skybox, "skybox"),
      water: ed.water === true,
      seed: numberField(ed.seed, "seed"),
      fallbacks: Array.isArray(ed.fallbacks) ? ed.fallbacks.map((c) => String(c)) : [],
    };
  }
  scene.revision = numberField(doc.revision ?? 0, "revision");
  return scene;
}
