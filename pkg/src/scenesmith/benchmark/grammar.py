"""Template grammar for benchmark scene descriptions.

Descriptions are subject-relation-object sentences over a fixed 40-noun
vocabulary. Generation draws a hidden random total order per axis and only
emits relations consistent with it, so every generated scene is satisfiable
by construction. The grammar is invertible: extract_relations recovers
exactly the emitted relation set and nothing more (no transitive closure,
no inverse augmentation).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from scenesmith.core.relations import SpatialRelation, SpatialRelationKind
from scenesmith.errors import ExtractionFailed

NOUNS = (
    "armchair", "barrel", "basket", "bench", "bicycle", "birdbath",
    "bookshelf", "cactus", "campfire", "candle", "cart", "chair",
    "crate", "drum", "fern", "flagpole", "fountain", "gnome",
    "hammock", "lamp", "lantern", "mailbox", "mug", "mushroom",
    "piano", "pillar", "pond", "rock", "rug", "sculpture",
    "shed", "sofa", "statue", "stool", "swing", "table",
    "teapot", "tent", "tree", "wheelbarrow",
)

MIN_OBJECTS, MAX_OBJECTS = 2, 8
MIN_RELATIONS, MAX_RELATIONS = 3, 14

_PHRASES = {
    SpatialRelationKind.LEFT: "is left of",
    SpatialRelationKind.RIGHT: "is right of",
    SpatialRelationKind.FRONT: "is in front of",
    SpatialRelationKind.BEHIND: "is behind",
    SpatialRelationKind.BELOW: "is below",
    SpatialRelationKind.ABOVE: "is above",
}
_KIND_BY_PHRASE = {p: k for k, p in _PHRASES.items()}

_SENTENCE_RE = re.compile(
    r"[Tt]he (\w+) (is left of|is right of|is in front of|is behind|is below|is above) "
    r"the (\w+)[.!]?"
)


def sentence(relation: SpatialRelation) -> str:
    return f"The {relation.source} {_PHRASES[relation.kind]} the {relation.target}."


@dataclass(frozen=True)
class SceneDescription:
    """One benchmark scene: prose plus the relation set the prose encodes."""

    description: str
    objects: tuple[str, ...]
    relations: tuple[SpatialRelation, ...] = field(default_factory=tuple)


def generate_scene(
    rng: random.Random,
    n_objects: int | None = None,
    n_relations: int | None = None,
) -> SceneDescription:
    if n_objects is None:
        n_objects = rng.randint(MIN_OBJECTS, MAX_OBJECTS)
    names = tuple(sorted(rng.sample(NOUNS, n_objects)))
    # Hidden ground-truth orders, one per axis: relations are only ever
    # phrased consistently with these, so no axis can acquire a cycle.
    orders = {}
    for axis in ("x", "y", "z"):
        perm = list(names)
        rng.shuffle(perm)
        orders[axis] = {name: i for i, name in enumerate(perm)}

    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1 :]]
    slots = [(pair, axis) for pair in pairs for axis in ("x", "y", "z")]
    cap = len(slots)
    if n_relations is None:
        n_relations = rng.randint(MIN_RELATIONS, min(MAX_RELATIONS, cap))
    if not 1 <= n_relations <= cap:
        raise ValueError(f"cannot fit {n_relations} relations over {n_objects} objects")

    chosen = rng.sample(slots, n_relations)
    relations = []
    for (a, b), axis in chosen:
        lesser, greater = (a, b) if orders[axis][a] < orders[axis][b] else (b, a)
        kinds = [k for k in SpatialRelationKind if k.axis == axis]
        lesser_kind = next(k for k in kinds if k.source_is_lesser)
        if rng.random() < 0.5:
            relations.append(SpatialRelation(lesser, lesser_kind, greater))
        else:
            relations.append(SpatialRelation(greater, lesser_kind.inverse, lesser))
    text = " ".join(sentence(r) for r in relations)
    return SceneDescription(text, names, tuple(relations))


def extract_relations(text: str) -> tuple[SpatialRelation, ...]:
    """Recover the explicitly stated relations, and only those.

    This is the grammar's own inverse; it performs no composition. From
    "The crate is above the rock. The rock is above the fern." it returns
    exactly those two triples and never (crate, Above, fern).
    """
    out = []
    for source, phrase, target in _SENTENCE_RE.findall(text):
        if source != target:
            out.append(SpatialRelation(source, _KIND_BY_PHRASE[phrase], target))
    return tuple(out)


def extract_relations_strict(text: str) -> tuple[SpatialRelation, ...]:
    relations = extract_relations(text)
    if not relations:
        raise ExtractionFailed(f"no relation phrases found in {text!r}")
    return relations
