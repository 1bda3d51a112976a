import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  canonicalSceneText,
  objectDoc,
  objectFromDoc,
  parseCanonicalScene,
  sceneHash,
} from "../src/canonical";
import { SceneGraph, SceneObject, ValidationError, makeBehavior } from "../src/scene";

interface SceneVector {
  label: string;
  canonical: string;
  hash: string;
}

const VECTORS: SceneVector[] = JSON.parse(
  readFileSync(new URL("../test-vectors/scenes.json", import.meta.url), "utf-8"),
);

const EMPTY_HASH = "b3c9cab1d564f4691c047cc9d75ba8f25ef50cc7d153f3d1adb32028b30acd5b";

function obj(partial: Partial<SceneObject> & { id: string; name: string }): SceneObject {
  return {
    extents: [1, 1, 1],
    placement: { position: [0, 0, 0], yaw_deg: 0, scale: 1 },
    state: "Proposed",
    owner: null,
    asset_uid: null,
    behaviors: [],
    properties: {},
    ...partial,
  };
}

describe("canonical scene text", () => {
  it("hashes the empty scene to the published value", () => {
    const scene = new SceneGraph();
    expect(canonicalSceneText(scene)).toBe('{"environment":null,"objects":{},"revision":0}');
    expect(sceneHash(scene)).toBe(EMPTY_HASH);
  });

  it("round-trips every committed server-generated vector byte for byte", () => {
    for (const v of VECTORS) {
      const scene = parseCanonicalScene(v.canonical);
      expect(canonicalSceneText(scene), v.label).toBe(v.canonical);
      expect(sceneHash(scene), v.label).toBe(v.hash);
    }
  });

  it("emits the mixed-feature scene identically to the server", () => {
    // Reconstructed with the same inputs the server used to produce the
    // "full" vector: full-precision doubles in, fixed 6-decimal text out.
    const scene = new SceneGraph();
    scene.addObject(
      obj({
        id: "obj-1",
        name: "café table",
        extents: [1.5, 0.75, 1.1],
        placement: { position: [0.1 + 0.2, -0, 2.0000005], yaw_deg: 270, scale: 0.5 },
        state: "Finalized",
        owner: "alice",
        asset_uid: "toy/table",
        behaviors: [
          makeBehavior(
            "bhv-1",
            "spawner_tool",
            { spawned_shape: "cube", rate: 2.5, enabled: true },
            "obj-1",
          ),
        ],
        properties: { label: "café ☕", weight: 1.0 / 3.0, tagged: false },
      }),
    );
    scene.addObject(
      obj({
        id: "obj-2",
        name: "lamp",
        extents: [1.0, 1.0, 2.0],
        placement: { position: [-3.0, 4.0, 0.0], yaw_deg: 0, scale: 1.0 },
      }),
    );
    scene.setEnvironment({
      terrain_kind: "dunes",
      realism: "low_poly",
      noise: { amplitude: 2.0, frequency: 0.05, octaves: 4, persistence: 0.5 },
      elevation_ref: null,
      material: "sand",
      terrain_layer: "Sand_TerrainLayer",
      skybox: "sunset_skybox",
      water: true,
      seed: 0,
      fallbacks: ["material"],
    });

    const vector = VECTORS.find((v) => v.label === "full")!;
    expect(canonicalSceneText(scene)).toBe(vector.canonical);
    expect(sceneHash(scene)).toBe(vector.hash);
  });

  it("emits the terrain-reference scene identically to the server", () => {
    const scene = new SceneGraph();
    scene.addObject(
      obj({
        id: "a",
        name: "marker",
        placement: { position: [7.0000004999, -0.0000005, 0.0000015], yaw_deg: 0, scale: 1.0 },
      }),
    );
    scene.setEnvironment({
      terrain_kind: "alpine",
      realism: "realistic",
      noise: null,
      elevation_ref: { lat: 46.55, lon: 8.56, extent_m: 2000.0 },
      material: "rock",
      terrain_layer: "Rock_TerrainLayer",
      skybox: "overcast_skybox",
      water: false,
      seed: 0,
      fallbacks: [],
    });

    const vector = VECTORS.find((v) => v.label === "realistic")!;
    expect(canonicalSceneText(scene)).toBe(vector.canonical);
    expect(sceneHash(scene)).toBe(vector.hash);
  });

  it("sorts object ids and property keys by code point", () => {
    const scene = new SceneGraph();
    // Insertion order deliberately disagrees with code-point order, and
    // "Z" (0x5a) must sort before "a" (0x61).
    scene.addObject(obj({ id: "a", name: "second", properties: { b: 1, B: 2, a: 3 } }));
    scene.addObject(obj({ id: "Z", name: "first" }));
    const text = canonicalSceneText(scene);
    expect(text.indexOf('"Z"')).toBeLessThan(text.indexOf('"a"'));
    expect(text).toContain('"properties":{"B":2.000000,"a":3.000000,"b":1.000000}');
  });

  it("escapes strings to ASCII, astral characters as surrogate pairs", () => {
    const scene = new SceneGraph();
    scene.addObject(obj({ id: "o", name: "fox 🦊 sign\n«ok»" }));
    const text = canonicalSceneText(scene);
    expect(text).toContain('"name":"fox \\ud83e\\udd8a sign\\n\\u00abok\\u00bb"');
    // Round-trip through the parser preserves the original characters.
    expect(parseCanonicalScene(text).require("o").name).toBe("fox 🦊 sign\n«ok»");
  });

  it("keeps the sign of negative zero in positions", () => {
    const scene = new SceneGraph();
    scene.addObject(obj({ id: "o", name: "box", placement: { position: [0, -0, 0], yaw_deg: 0, scale: 1 } }));
    expect(canonicalSceneText(scene)).toContain('"position":[0.000000,-0.000000,0.000000]');
  });

  it("emits integer-valued fields bare and reals fixed", () => {
    const scene = new SceneGraph();
    scene.addObject(
      obj({
        id: "o",
        name: "box",
        placement: { position: [1, 2, 3], yaw_deg: 90, scale: 2 },
      }),
    );
    const text = canonicalSceneText(scene);
    expect(text).toContain('"yaw_deg":90');
    expect(text).toContain('"scale":2.000000');
    expect(text).toMatch(/"revision":1\}$/);
  });
});

describe("object documents", () => {
  it("round-trips an object through its wire document", () => {
    const original = obj({
      id: "x",
      name: "crate",
      owner: "alice",
      state: "FirstPass",
      asset_uid: "toy/crate",
      behaviors: [makeBehavior("b-1", "custom", { description: "glows" }, "x")],
      properties: { weight: 1.25 },
    });
    const copy = objectFromDoc("x", objectDoc(original));
    expect(copy).toEqual(original);
  });

  it("defaults owner to empty string, scale to 1, state to Proposed", () => {
    const o = objectFromDoc("x", {
      name: "crate",
      extents: [1, 1, 1],
      placement: { position: [0, 0, 0], yaw_deg: 0 },
    });
    expect(o.owner).toBe("");
    expect(o.placement.scale).toBe(1.0);
    expect(o.state).toBe("Proposed");
    expect(o.asset_uid).toBeNull();
    expect(o.behaviors).toEqual([]);
  });

  it("rejects documents that violate object invariants", () => {
    const base = {
      name: "crate",
      extents: [1, 1, 1],
      placement: { position: [0, 0, 0], yaw_deg: 0 },
    };
    // asset_uid on a still-Proposed object
    expect(() => objectFromDoc("x", { ...base, asset_uid: "toy/crate" })).toThrow(
      ValidationError,
    );
    expect(() =>
      objectFromDoc("x", { ...base, extents: [0, 1, 1] }),
    ).toThrow(ValidationError);
    expect(() =>
      objectFromDoc("x", { ...base, placement: { position: [0, 0, 0], yaw_deg: 45 } }),
    ).toThrow(ValidationError);
    expect(() =>
      objectFromDoc("x", { ...base, placement: { position: [0, 0], yaw_deg: 0 } }),
    ).toThrow(ValidationError);
    expect(() => objectFromDoc("x", { ...base, name: 7 })).toThrow(ValidationError);
    expect(() =>
      objectFromDoc("x", {
        ...base,
        behaviors: [{ behavior_id: "b", kind: "nope", parameters: {}, target: "x" }],
      }),
    ).toThrow(ValidationError);
  });
});
