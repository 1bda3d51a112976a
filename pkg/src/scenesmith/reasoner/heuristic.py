"""Rule-based fallback provider.

Answers every text-only template deterministically: keyword lexicons for the
routing/environment choices and the constraint solver for layout work. It
reads only the marked input section of a rendered prompt, so few-shot
examples never contaminate its parsing. Vision templates (sketch_tag,
orientation without a usable glyph description) are declined.
"""

from __future__ import annotations

import json
import random
import re
import zlib

from scenesmith.benchmark import grammar
from scenesmith.errors import ProviderUnavailable
from scenesmith.layout.solver import solve_layout
from scenesmith.reasoner.requests import ReasonerRequest
from scenesmith.reasoner.templates import input_block

_INTERACTIVE_WORDS = (
    "grab", "grabbable", "tool", "spawn", "spawns", "shoot", "shoots",
    "draw", "draws", "paint", "paints", "trigger", "wand", "throwable",
    "interactive", "clickable", "holdable",
)

# Verbs that introduce new content ("make" is deliberately absent: "make
# the mug grabbable" modifies an existing object, it does not add one).
_CREATION_WORDS = frozenset(
    ("add", "create", "place", "build", "put", "fill", "scatter")
)

# name -> plausible extents, used when proposing assets without a reasoner
_SIZE_LEXICON = {
    "tree": (2.0, 2.0, 5.0),
    "mushroom": (0.4, 0.4, 0.5),
    "rock": (1.0, 0.8, 0.6),
    "table": (2.0, 1.0, 0.8),
    "chair": (0.5, 0.5, 1.0),
    "lamp": (0.4, 0.4, 1.6),
    "tent": (2.5, 2.0, 1.8),
    "campfire": (1.0, 1.0, 0.5),
    "bench": (1.8, 0.6, 0.9),
    "fountain": (2.0, 2.0, 1.5),
    "statue": (1.0, 1.0, 2.5),
    "unicorn": (2.2, 0.8, 2.0),
    "gnome": (0.4, 0.4, 0.8),
    "mug": (0.12, 0.12, 0.15),
    "bicycle": (1.8, 0.5, 1.1),
}

_GAZETTEER = {
    "matterhorn": (45.9763, 7.6586, 4000.0),
    "alps": (46.5, 8.0, 20000.0),
    "grand canyon": (36.1069, -112.1129, 15000.0),
    "mount fuji": (35.3606, 138.7274, 12000.0),
    "sahara": (23.4162, 13.0, 30000.0),
    "yosemite": (37.8651, -119.5383, 15000.0),
    "death valley": (36.5323, -116.9325, 20000.0),
}

_STOPWORDS = frozenset(
    "a an and are at by create for from in into is it make me my of on or our "
    "please scene that the them then this to us with add build put set".split()
)

# scene-theme words that imply assets even when none are named outright
_THEME_HINTS = {
    "forest": ("tree", "mushroom", "rock"),
    "camp": ("tent", "campfire"),
    "campsite": ("tent", "campfire"),
    "park": ("bench", "tree", "fountain"),
    "garden": ("bench", "fountain", "statue"),
    "picnic": ("table", "bench"),
}


def _words(text: str) -> list[str]:
    return re.findall(r"[a-z_]+", text.lower())


def _line_value(prompt: str, label: str) -> str:
    m = re.search(rf"^{re.escape(label)}:\s*(.*)$", prompt, re.MULTILINE)
    return m.group(1).strip() if m else ""


def _presets(prompt: str) -> list[str]:
    raw = _line_value(prompt, "- Presets")
    return [p.strip() for p in raw.split(",") if p.strip()]


def _pick(presets: list[str], table: dict[str, str], words: set[str], default: str) -> str:
    for keyword, choice in table.items():
        if keyword in words and (not presets or choice in presets):
            return choice
    if presets and default not in presets:
        return presets[0]
    return default


class HeuristicProvider:
    name = "heuristic"

    def complete(self, request: ReasonerRequest) -> str:
        handler = getattr(self, f"_{request.template_id}", None)
        if handler is None:
            raise ProviderUnavailable(f"no heuristic for {request.template_id}")
        return json.dumps(handler(request.rendered_prompt))

    # ------------------------------------------------------------ routing

    def _decider(self, prompt: str) -> dict:
        text = input_block(prompt)
        words = set(_words(text))
        if not words & set(_INTERACTIVE_WORDS):
            return {"mode": "static_scene", "rationale": "scene content request"}
        known = [
            n.strip()
            for n in _line_value(prompt, "- Known scene objects").split(",")
            if n.strip() and n.strip() != "none"
        ]
        target = next((n for n in known if n.lower() in words), "")
        if not target:
            # Behavior names an object not in the scene yet; guess the noun.
            target = next((w for w in _words(text) if w in _SIZE_LEXICON), "")
        if {"spawn", "spawns", "shoot", "shoots", "wand"} & words:
            kind = "spawner_tool"
            m = re.search(r"spawns?\s+(\w+)", text.lower())
            shape = m.group(1).rstrip("s") if m else "sphere"
            params = {"spawned_shape": shape}
        elif {"draw", "draws", "paint", "paints"} & words:
            kind, params = "draw_tool", {}
        elif {"grab", "grabbable", "holdable"} & words:
            kind, params = "grabbable", {}
        else:
            kind, params = "custom", {"description": text}
        behavior = {"kind": kind, "target": target, "parameters": params}
        if words & _CREATION_WORDS:
            # Content and behavior in one prompt: build first, then attach.
            return {
                "mode": "static_scene",
                "rationale": "content request with follow-up behavior",
                "behavior": behavior,
            }
        return {
            "mode": "interactive",
            "rationale": "behavior request",
            "behavior": behavior,
        }

    # ------------------------------------------------------------- layout

    def _layout_objects(self, names: list[str], text: str) -> list[dict]:
        relations = [
            r for r in grammar.extract_relations(text)
            if not names or (r.source in names and r.target in names)
        ]
        if relations:
            positions = solve_layout(names, relations)
            return [
                {"name": n, "position": [p.x, p.y, p.z]}
                for n, p in sorted(positions.items())
            ]
        return [
            {"name": n, "position": [float((i % 3) * 2 - 2), float((i // 3) * 2 - 2), 0.0]}
            for i, n in enumerate(sorted(names))
        ]

    def _layout_initial(self, prompt: str) -> dict:
        text = input_block(prompt)
        names = [n.strip() for n in _line_value(text, "Objects").split(",") if n.strip()]
        if not names:
            names = sorted({w for r in grammar.extract_relations(text) for w in (r.source, r.target)})
        if not names:
            raise ProviderUnavailable("layout request names no objects")
        return {"objects": self._layout_objects(names, text)}

    def _layout_update(self, prompt: str) -> dict:
        text = input_block(prompt)
        description = _line_value(text, "Description")
        state_raw = text.partition("Scene state:")[2].strip()
        try:
            doc = json.loads(state_raw)
        except json.JSONDecodeError as e:
            raise ProviderUnavailable(f"unreadable scene state: {e}") from e
        positions = {
            o["name"]: o["placement"]["position"] for o in doc.get("objects", {}).values()
        }
        relations = [
            r for r in grammar.extract_relations(description)
            if r.source in positions and r.target in positions
        ]
        axis_i = {"x": 0, "y": 1, "z": 2}

        def ok(r):
            d = positions[r.source][axis_i[r.kind.axis]] - positions[r.target][axis_i[r.kind.axis]]
            return d < 0 if r.kind.source_is_lesser else d > 0

        if all(ok(r) for r in relations):
            return {"done": True}
        names = sorted({w for r in relations for w in (r.source, r.target)})
        solved = solve_layout(names, relations)
        moves = [
            {"name": n, "position": [p.x, p.y, p.z]}
            for n, p in sorted(solved.items())
            if [p.x, p.y, p.z] != [float(c) for c in positions[n]]
        ]
        return {"done": False, "objects": moves}

    def _orientation(self, prompt: str) -> dict:
        return {"facing": "Unknown"}

    def _asset_proposal(self, prompt: str) -> dict:
        text = input_block(prompt)
        words = _words(text)
        seen: dict[str, None] = {}
        for w in words:
            for hinted in _THEME_HINTS.get(w, ()):
                seen.setdefault(hinted)
        for w in words:
            singular = w[:-1] if w.endswith("s") and w[:-1] in _SIZE_LEXICON else w
            if singular in _SIZE_LEXICON:
                seen.setdefault(singular)
        if not seen:
            for w in words:
                if w not in _STOPWORDS and len(w) > 2:
                    seen.setdefault(w)
                if len(seen) == 4:
                    break
        if not seen:
            seen = {"rock": None}
        counts = {"two": 2, "three": 3, "four": 4, "five": 5, "six": 6}
        out = []
        for name in seen:
            entry = {
                "name": name,
                "query": name,
                "suggested_extents": list(_SIZE_LEXICON.get(name, (1.0, 1.0, 1.0))),
            }
            m = re.search(rf"(\w+)\s+{name}s?\b", text.lower())
            if m and m.group(1) in counts:
                entry["count"] = counts[m.group(1)]
            elif m and m.group(1).isdigit():
                entry["count"] = max(1, int(m.group(1)))
            out.append(entry)
        return {"objects": out}

    # -------------------------------------------------------- environment

    def _terrain_lowpoly(self, prompt: str) -> dict:
        words = set(_words(input_block(prompt)))
        table = {
            "farm": "farmland", "farmland": "farmland", "barn": "farmland",
            "mountain": "mountain", "mountains": "mountain", "peak": "mountain",
            "alpine": "mountain", "hill": "mountain", "hills": "mountain",
            "desert": "desert", "dune": "desert", "dunes": "desert",
            "island": "island", "beach": "island", "coast": "island",
            "lake": "island", "canyon": "canyon", "mesa": "canyon",
        }
        return {"terrain_kind": _pick(_presets(prompt), table, words, "meadow")}

    def _terrain_realistic(self, prompt: str) -> dict:
        text = input_block(prompt).lower()
        for place, (lat, lon, extent) in _GAZETTEER.items():
            if place in text:
                return {
                    "match": True,
                    "place": place,
                    "lat": lat,
                    "lon": lon,
                    "extent_m": extent,
                }
        return {"match": False}

    def _material(self, prompt: str) -> dict:
        words = set(_words(input_block(prompt)))
        table = {
            "sand": "sand", "beach": "sand", "desert": "sand", "dunes": "sand",
            "snow": "snow", "ice": "snow", "glacier": "snow",
            "rock": "rock", "stone": "rock", "canyon": "rock",
            "mud": "mud", "swamp": "mud",
        }
        return {"material": _pick(_presets(prompt), table, words, "grass")}

    def _terrain_layer(self, prompt: str) -> dict:
        words = set(_words(input_block(prompt)))
        table = {
            "sand": "Sand_TerrainLayer", "beach": "Sand_TerrainLayer",
            "dunes": "Sand_TerrainLayer", "sea": "Sand_TerrainLayer",
            "snow": "Snow_TerrainLayer", "ice": "Snow_TerrainLayer",
            "rock": "Rock_TerrainLayer", "canyon": "Rock_TerrainLayer",
            "flower": "Flower_TerrainLayer", "flowers": "Flower_TerrainLayer",
            "garden": "Flower_TerrainLayer",
        }
        return {"terrain_layer": _pick(_presets(prompt), table, words, "Grass_TerrainLayer")}

    def _skybox(self, prompt: str) -> dict:
        words = set(_words(input_block(prompt)))
        table = {
            "night": "night_starry_skybox", "starlit": "night_starry_skybox",
            "stars": "night_starry_skybox", "starry": "night_starry_skybox",
            "sunset": "sunset_warm_skybox", "dusk": "sunset_warm_skybox",
            "evening": "sunset_warm_skybox", "sunrise": "sunrise_cool_skybox",
            "dawn": "sunrise_cool_skybox", "morning": "sunrise_cool_skybox",
            "storm": "overcast_gray_skybox", "overcast": "overcast_gray_skybox",
            "rain": "overcast_gray_skybox", "gloomy": "overcast_gray_skybox",
        }
        return {"skybox": _pick(_presets(prompt), table, words, "daytime_bright_skybox")}

    def _water(self, prompt: str) -> dict:
        words = set(_words(input_block(prompt)))
        wet = {
            "lake", "river", "ocean", "sea", "pond", "beach", "island",
            "coast", "harbor", "swamp", "water", "waterfall",
        }
        if words & wet:
            return {"water": True, "level": 0.2}
        return {"water": False}

    # ---------------------------------------------------------- benchmark

    def _sketch_tag(self, prompt: str) -> dict:
        raise ProviderUnavailable("sketch parsing requires a vision provider")

    def _scene_gen(self, prompt: str) -> dict:
        seed = zlib.crc32(input_block(prompt).encode("utf-8"))
        scene = grammar.generate_scene(random.Random(seed))
        return {"description": scene.description}

    def _graph_extract(self, prompt: str) -> dict:
        text = input_block(prompt)
        return {
            "relations": [list(r.as_triple()) for r in grammar.extract_relations(text)]
        }
