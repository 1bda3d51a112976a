/**
 * Client-side scene model: the replica's mirror of the server's scene
 * graph. Field names match the wire documents exactly so messages map
 * onto objects without translation, and all validation mirrors the
 * server's — a replica that would accept a document the server rejects
 * (or vice versa) has already diverged.
 */

export type Vec3 = [number, number, number];
export type Scalar = string | number | boolean | null;

// ----------------------------------------------------------- lifecycle

export type PlaceholderState = "Proposed" | "FirstPass" | "Finalized" | "Removed";

export const STATE_ORDER: readonly PlaceholderState[] = [
  "Proposed",
  "FirstPass",
  "Finalized",
  "Removed",
];

/** Wireframe walk: red (proposed) -> yellow (first pass) -> green (final). */
export const STATE_COLORS: Record<PlaceholderState, string | null> = {
  Proposed: "#cc2929",
  FirstPass: "#c29411",
  Finalized: "#208c3c",
  Removed: null,
};

export function stateRank(state: PlaceholderState): number {
  return STATE_ORDER.indexOf(state);
}

export function requireState(value: unknown): PlaceholderState {
  if (typeof value === "string" && STATE_ORDER.includes(value as PlaceholderState)) {
    return value as PlaceholderState;
  }
  throw new ValidationError(`${JSON.stringify(value)} is not a placeholder state`);
}

// ----------------------------------------------------------- behaviors

export type BehaviorKind = "grabbable" | "spawner_tool" | "draw_tool" | "custom";

export const BEHAVIOR_KINDS: readonly BehaviorKind[] = [
  "grabbable",
  "spawner_tool",
  "draw_tool",
  "custom",
];

const REQUIRED_BEHAVIOR_PARAMS: Record<BehaviorKind, readonly string[]> = {
  grabbable: [],
  spawner_tool: ["spawned_shape"],
  draw_tool: [],
  custom: ["description"],
};

export interface BehaviorDescriptor {
  behavior_id: string;
  kind: BehaviorKind;
  parameters: Record<string, Scalar>;
  target_object_id: string;
}

export class ValidationError extends Error {}

export class UnknownObjectError extends Error {}

function isScalar(value: unknown): value is Scalar {
  return (
    value === null ||
    typeof value === "string" ||
    typeof value === "number" ||
    typeof value === "boolean"
  );
}

export function makeBehavior(
  behaviorId: string,
  kind: string,
  parameters: Record<string, unknown>,
  targetObjectId: string,
): BehaviorDescriptor {
  if (!BEHAVIOR_KINDS.includes(kind as BehaviorKind)) {
    throw new ValidationError(`unknown behavior kind ${JSON.stringify(kind)}`);
  }
  const missing = REQUIRED_BEHAVIOR_PARAMS[kind as BehaviorKind].filter(
    (p) => !(p in parameters),
  );
  if (missing.length > 0) {
    throw new ValidationError(
      `${kind} behavior missing required parameters: ${missing.join(", ")}`,
    );
  }
  const params: Record<string, Scalar> = {};
  for (const [key, value] of Object.entries(parameters)) {
    if (!isScalar(value)) {
      throw new ValidationError(`behavior parameter ${key} must be a scalar`);
    }
    params[key] = value;
  }
  return {
    behavior_id: behaviorId,
    kind: kind as BehaviorKind,
    parameters: params,
    target_object_id: targetObjectId,
  };
}

// ------------------------------------------------------------ geometry

export const VALID_YAWS: readonly number[] = [0, 90, 180, 270];

export interface Placement {
  position: Vec3;
  yaw_deg: number;
  scale: number;
}

export function requireVec3(value: unknown, what: string): Vec3 {
  if (!Array.isArray(value) || value.length !== 3) {
    throw new ValidationError(`${what} must be a 3-vector`);
  }
  for (const c of value) {
    if (typeof c !== "number" || !Number.isFinite(c)) {
      throw new ValidationError(`${what} component must be finite, got ${c}`);
    }
  }
  return [value[0], value[1], value[2]];
}

export function requireExtents(value: unknown): Vec3 {
  const v = requireVec3(value, "extents");
  if (v[0] <= 0 || v[1] <= 0 || v[2] <= 0) {
    throw new ValidationError(`extents must be strictly positive, got [${v.join(", ")}]`);
  }
  return v;
}

export function requirePlacement(
  position: unknown,
  yawDeg: unknown,
  scale: unknown,
): Placement {
  const pos = requireVec3(position, "position");
  if (typeof yawDeg !== "number" || !VALID_YAWS.includes(yawDeg)) {
    throw new ValidationError(
      `yaw_deg must be one of ${VALID_YAWS.join(", ")}, got ${yawDeg}`,
    );
  }
  if (typeof scale !== "number" || !Number.isFinite(scale) || scale <= 0) {
    throw new ValidationError(`scale must be positive and finite, got ${scale}`);
  }
  return { position: pos, yaw_deg: yawDeg, scale };
}

// -------------------------------------------------------------- scene

export interface SceneObject {
  id: string;
  name: string;
  extents: Vec3;
  placement: Placement;
  state: PlaceholderState;
  owner: string | null;
  asset_uid: string | null;
  behaviors: BehaviorDescriptor[];
  properties: Record<string, Scalar>;
}

/** Enforce the cross-field rules an object must satisfy at all times. */
export function validateObject(obj: SceneObject): SceneObject {
  requireExtents(obj.extents);
  requirePlacement(obj.placement.position, obj.placement.yaw_deg, obj.placement.scale);
  requireState(obj.state);
  if (obj.asset_uid !== null && stateRank(obj.state) < stateRank("FirstPass")) {
    throw new ValidationError("asset_uid requires state FirstPass or later");
  }
  return obj;
}

export interface NoiseParams {
  amplitude: number;
  frequency: number;
  octaves: number;
  persistence: number;
}

export interface ElevationRef {
  extent_m: number;
  lat: number;
  lon: number;
}

export interface EnvironmentSpec {
  terrain_kind: string;
  realism: string;
  noise: NoiseParams | null;
  elevation_ref: ElevationRef | null;
  material: string;
  terrain_layer: string;
  skybox: string;
  water: boolean;
  seed: number;
  fallbacks: string[];
}

/**
 * Objects plus optional environment plus a strictly monotone revision.
 * Every mutation bumps the revision by exactly one; object ids are never
 * reused within a session, even after removal.
 */
export class SceneGraph {
  objects = new Map<string, SceneObject>();
  environment: EnvironmentSpec | null = null;
  revision = 0;
  private retired = new Set<string>();

  addObject(obj: SceneObject): void {
    if (this.objects.has(obj.id) || this.retired.has(obj.id)) {
      throw new ValidationError(`object id ${JSON.stringify(obj.id)} already used in this session`);
    }
    this.objects.set(obj.id, obj);
    this.revision += 1;
  }

  replaceObject(obj: SceneObject): void {
    if (!this.objects.has(obj.id)) {
      throw new UnknownObjectError(`no object ${JSON.stringify(obj.id)} in scene`);
    }
    this.objects.set(obj.id, obj);
    this.revision += 1;
  }

  removeObject(objectId: string): void {
    if (!this.objects.has(objectId)) {
      throw new UnknownObjectError(`no object ${JSON.stringify(objectId)} in scene`);
    }
    this.objects.delete(objectId);
    this.retired.add(objectId);
    this.revision += 1;
  }

  setEnvironment(environment: EnvironmentSpec | null): void {
    this.environment = environment;
    this.revision += 1;
  }

  require(objectId: string): SceneObject {
    const obj = this.objects.get(objectId);
    if (obj === undefined) {
      throw new UnknownObjectError(`no object ${JSON.stringify(objectId)} in scene`);
    }
    return obj;
  }

  /** Distinct non-null owners, sorted — the roster the presence panel shows. */
  contributors(): string[] {
    const owners = new Set<string>();
    for (const obj of this.objects.values()) {
      if (obj.owner) owners.add(obj.owner);
    }
    return [...owners].sort();
  }
}
