import json

import pytest

from scenesmith.errors import (
    AllProvidersFailed,
    ProviderTransientError,
    ProviderUnavailable,
    SchemaViolation,
)
from scenesmith.reasoner.fixtures import FixtureProvider, FixtureStore
from scenesmith.reasoner.gateway import (
    ProviderPolicy,
    ReasonerGateway,
    build_request,
    extract_json,
)
from scenesmith.reasoner.heuristic import HeuristicProvider
from scenesmith.reasoner.requests import TEMPLATE_IDS, request_digest
from scenesmith.reasoner.schemas import validate_payload
from scenesmith.reasoner.scripted import ScriptedProvider
from scenesmith.reasoner.templates import default_library

SAMPLE_VARIABLES = {
    "prompt": "add a tent near a campfire",
    "known_objects": "tent, campfire",
    "objects": "tent, campfire",
    "description": "The tent is behind the campfire.",
    "min_coord": "-8",
    "max_coord": "8",
    "legend": "1=tent, 2=campfire",
    "scene_state": '{"environment":null,"objects":{},"revision":0}',
    "asset_name": "tent",
    "max_assets": "12",
    "presets": "meadow, dunes, alpine",
    "hint": "a small tree",
    "seed": "7",
}


def vars_for(template_id: str) -> dict[str, str]:
    lib = default_library()
    return {name: SAMPLE_VARIABLES[name] for name in lib.variables(template_id)}


# ----------------------------------------------------------------- templates


def test_every_template_renders_and_names_variables():
    lib = default_library()
    for tid in TEMPLATE_IDS:
        text = lib.render(tid, vars_for(tid))
        assert "{{" not in text, f"{tid} left an unfilled placeholder"
        assert "### INPUT" in lib.source(tid)


def test_render_rejects_missing_and_extra_variables():
    lib = default_library()
    with pytest.raises(KeyError):
        lib.render("decider", {"prompt": "x"})  # known_objects missing
    with pytest.raises(KeyError):
        lib.render("orientation", {"asset_name": "a", "bogus": "y"})
    with pytest.raises(KeyError):
        lib.source("poetry")


def test_build_request_carries_rendered_prompt_and_images():
    req = build_request("orientation", {"asset_name": "lamp"}, images=(b"\x89PNG",))
    assert "lamp" in req.rendered_prompt
    assert req.images == (b"\x89PNG",)
    assert req.template_id == "orientation"


# -------------------------------------------------------------------- digest


def test_digest_depends_on_template_prompt_and_images():
    a = build_request("water", {"prompt": "lake"})
    b = build_request("water", {"prompt": "desert"})
    c = build_request("skybox", {"prompt": "lake", "presets": "x"})
    assert request_digest(a) != request_digest(b)
    assert request_digest(a) != request_digest(c)
    with_img = build_request("orientation", {"asset_name": "a"}, images=(b"one",))
    other_img = build_request("orientation", {"asset_name": "a"}, images=(b"two",))
    no_img = build_request("orientation", {"asset_name": "a"})
    assert len({request_digest(x) for x in (with_img, other_img, no_img)}) == 3


def test_digest_is_stable_and_image_order_sensitive():
    r1 = build_request("orientation", {"asset_name": "a"}, images=(b"x", b"y"))
    r2 = build_request("orientation", {"asset_name": "a"}, images=(b"y", b"x"))
    assert request_digest(r1) == request_digest(r1)
    assert request_digest(r1) != request_digest(r2)


# ----------------------------------------------------------------- heuristic


def test_heuristic_answers_every_text_template_with_schema_valid_json():
    provider = HeuristicProvider()
    for tid in TEMPLATE_IDS:
        if tid == "sketch_tag":  # vision-only; covered below
            continue
        text = provider.complete(build_request(tid, vars_for(tid)))
        validate_payload(tid, extract_json(text))  # must not raise


def test_heuristic_declines_sketch_tagging():
    # Tagging a drawing needs eyes; the fallback must decline loudly rather
    # than invent a label, so the gateway can move on to another provider.
    provider = HeuristicProvider()
    with pytest.raises(ProviderUnavailable):
        provider.complete(build_request("sketch_tag", vars_for("sketch_tag")))


def test_heuristic_is_deterministic():
    provider = HeuristicProvider()
    req = build_request("asset_proposal", vars_for("asset_proposal"))
    assert provider.complete(req) == provider.complete(req)


def test_heuristic_parses_input_after_last_input_marker():
    # The decider must reason over the input block, not the instructions.
    provider = HeuristicProvider()
    req = build_request(
        "decider",
        {"prompt": "make the tent grabbable", "known_objects": "tent"},
    )
    parsed = extract_json(provider.complete(req))
    assert parsed["mode"] == "interactive"
    assert parsed["behavior"]["kind"] == "grabbable"


# -------------------------------------------------------------- extract_json


def test_extract_json_handles_fences_and_prose():
    assert extract_json('{"a": 1}') == {"a": 1}
    assert extract_json('Sure!\n```json\n{"a": 1}\n```\nDone.') == {"a": 1}
    assert extract_json('noise before {"a": {"b": 2}} noise after') == {"a": {"b": 2}}
    with pytest.raises(ValueError):
        extract_json("no json here at all")


# ------------------------------------------------------------------- gateway


class FlakyProvider:
    name = "remote"

    def __init__(self, fail_times: int, text='{"match": false}', exc=ProviderTransientError):
        self.fail_times = fail_times
        self.calls = 0
        self.text = text
        self.exc = exc

    def complete(self, request):
        self.calls += 1
        if self.calls <= self.fail_times:
            raise self.exc("synthetic failure")
        return self.text


def test_policy_order_and_fallback():
    store = ScriptedProvider({}, default=None)  # always unavailable
    gw = ReasonerGateway(
        {"fixture": store, "heuristic": HeuristicProvider()},
        policy=ProviderPolicy(order=("fixture", "heuristic")),
    )
    resp = gw.invoke(build_request("water", {"prompt": "a pond"}))
    assert resp.provider == "heuristic"


def test_transient_failures_retry_within_budget():
    flaky = FlakyProvider(fail_times=2)
    gw = ReasonerGateway({"remote": flaky}, policy=ProviderPolicy(order=("remote",)))
    resp = gw.invoke(build_request("terrain_realistic", {"prompt": "alps"}))
    assert resp.attempt == 3 and flaky.calls == 3


def test_budget_exhaustion_raises_all_providers_failed():
    flaky = FlakyProvider(fail_times=99)
    gw = ReasonerGateway({"remote": flaky}, policy=ProviderPolicy(order=("remote",)))
    with pytest.raises(AllProvidersFailed):
        gw.invoke(build_request("terrain_realistic", {"prompt": "alps"}))
    assert flaky.calls == 3  # remote budget


def test_unparseable_output_is_schema_violation():
    bad = ScriptedProvider({"water": ['{"water": "maybe"}']})
    gw = ReasonerGateway({"fixture": bad}, policy=ProviderPolicy(order=("fixture",)))
    with pytest.raises(SchemaViolation):
        gw.invoke(build_request("water", {"prompt": "x"}))


def test_no_providers_configured():
    gw = ReasonerGateway({}, policy=ProviderPolicy(order=("remote",)))
    with pytest.raises(AllProvidersFailed):
        gw.invoke(build_request("water", {"prompt": "x"}))


def test_unavailable_provider_not_retried():
    class CountingUnavailable:
        name = "fixture"
        calls = 0

        def complete(self, request):
            type(self).calls += 1
            raise ProviderUnavailable("no fixture")

    gw = ReasonerGateway(
        {"fixture": CountingUnavailable()},
        policy=ProviderPolicy(order=("fixture",), attempts={"fixture": 5}),
    )
    with pytest.raises(AllProvidersFailed):
        gw.invoke(build_request("water", {"prompt": "x"}))
    assert CountingUnavailable.calls == 1


# ------------------------------------------------------------------ fixtures


def test_fixture_store_round_trip(tmp_path):
    store = FixtureStore(tmp_path / "fx")
    req = build_request("water", {"prompt": "a lake"})
    digest = request_digest(req)
    assert store.lookup(digest) is None and not store.has(digest)
    store.put(digest, '{"water": true}')
    assert store.has(digest) and store.lookup(digest) == '{"water": true}'
    assert store.digests() == [digest] and len(store) == 1


def test_fixture_provider_replays_and_declines(tmp_path):
    store = FixtureStore(tmp_path / "fx")
    req = build_request("water", {"prompt": "a lake"})
    store.put(request_digest(req), '{"water": true}')
    provider = FixtureProvider(store)
    assert json.loads(provider.complete(req)) == {"water": True}
    with pytest.raises(ProviderUnavailable):
        provider.complete(build_request("water", {"prompt": "dry mesa"}))


def test_remote_responses_auto_record(tmp_path):
    store = FixtureStore(tmp_path / "fx")
    remote = FlakyProvider(fail_times=0, text='{"match": false}')
    gw = ReasonerGateway(
        {"remote": remote},
        policy=ProviderPolicy(order=("remote",)),
        fixture_store=store,
        record_remote=True,
    )
    req = build_request("terrain_realistic", {"prompt": "alps"})
    gw.invoke(req)
    assert store.lookup(request_digest(req)) == '{"match": false}'
    # and the recorded fixture replays through a fixture-only gateway
    replay = ReasonerGateway(
        {"fixture": FixtureProvider(store)}, policy=ProviderPolicy(order=("fixture",))
    )
    assert replay.invoke(req).parsed == {"match": False}


def test_record_rejects_non_remote_responses(tmp_path):
    gw = ReasonerGateway(
        {"heuristic": HeuristicProvider()},
        policy=ProviderPolicy(order=("heuristic",)),
        fixture_store=FixtureStore(tmp_path),
    )
    req = build_request("water", {"prompt": "x"})
    resp = gw.invoke(req)
    with pytest.raises(ValueError):
        gw.record(req, resp)


# ------------------------------------------------------------------ scripted


def test_scripted_provider_plays_in_order_then_exhausts():
    p = ScriptedProvider({"water": [{"water": True}, {"water": False}]})
    req = build_request("water", {"prompt": "x"})
    assert json.loads(p.complete(req)) == {"water": True}
    assert json.loads(p.complete(req)) == {"water": False}
    with pytest.raises(ProviderUnavailable):
        p.complete(req)


def test_scripted_provider_callable_items_see_the_request():
    p = ScriptedProvider({"water": [lambda r: {"water": "pond" in r.rendered_prompt}]})
    assert json.loads(p.complete(build_request("water", {"prompt": "a pond"}))) == {
        "water": True
    }
