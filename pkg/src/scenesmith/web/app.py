"""HTTP + WebSocket service exposing sessions, prompts, and the catalog.

Transport summary:

- REST endpoints manage sessions, prompts, sketches, asset info and
  catalog search;
- ``/ws/{session}/{client}`` speaks the wire protocol: each WebSocket
  text frame is one JSON message body (no length prefix — the socket
  provides message boundaries);
- prompt results propagate to connected clients as a Snapshot broadcast
  bracketed by Ack status messages, so every replica converges on the
  authoritative scene hash after each pipeline run.
"""

from __future__ import annotations

import base64
import binascii
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.concurrency import run_in_threadpool

from ..catalog import default_index
from ..catalog.store import AssetInfoRecord, AssetInfoStore
from ..config import CliConfig, build_gateway
from ..core.canonical import canonical_scene_text, scene_hash
from ..errors import (
    AllProvidersFailed,
    EmptyCatalog,
    NotFound,
    SchemaViolation,
    SyncError,
    TagUnavailable,
)
from ..layout.engine import LayoutEngineConfig
from ..layout.render import render_topdown
from ..orchestrator.pipeline import Orchestrator
from ..sync.session import SessionHub
from ..sync.wire import MessageType, PROTOCOL_VERSION, WireMessage

_INDEX_HTML = """<!doctype html>
<html><head><title>scenesmith</title></head>
<body>
<h1>scenesmith server</h1>
<p>No bundled frontend found. The API is live:</p>
<ul>
<li>POST /sessions — create a session</li>
<li>POST /sessions/{id}/prompt — run a prompt</li>
<li>GET /sessions/{id}/scene — canonical scene + hash</li>
<li>WS /ws/{session}/{client} — replication stream</li>
</ul>
</body></html>
"""


class PromptBody(BaseModel):
    prompt: str
    client_id: str = "web"


class SketchBody(BaseModel):
    image_b64: str
    hint: str = ""
    client_id: str = "web"


class SearchBody(BaseModel):
    query: str
    k: int = 5


class AssetInfoBody(BaseModel):
    name: str = ""
    download_url: str = ""
    location: list[float] | None = None
    source: str = "external"


class _WsRegistry:
    def __init__(self):
        self._sockets: dict[str, dict[str, WebSocket]] = {}
        self._lock = threading.Lock()

    def add(self, session_id: str, client_id: str, ws: WebSocket) -> None:
        with self._lock:
            self._sockets.setdefault(session_id, {})[client_id] = ws

    def remove(self, session_id: str, client_id: str) -> None:
        with self._lock:
            self._sockets.get(session_id, {}).pop(client_id, None)

    def peers(self, session_id: str) -> list[WebSocket]:
        with self._lock:
            return list(self._sockets.get(session_id, {}).values())


def create_app(
    config: CliConfig | None = None,
    gateway=None,
    catalog=None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    config = config or CliConfig()
    gateway = gateway or build_gateway(config)
    catalog = catalog if catalog is not None else default_index()

    app = FastAPI(title="scenesmith", version="1.0")
    hub = SessionHub()
    asset_store = AssetInfoStore()
    orchestrators: dict[str, Orchestrator] = {}
    registry = _WsRegistry()
    state_lock = threading.Lock()

    engine_config = LayoutEngineConfig(
        min_coord=config.min_coord, max_coord=config.max_coord
    )

    app.state.hub = hub
    app.state.asset_store = asset_store

    def _session(session_id: str):
        try:
            return hub.get(session_id)
        except SyncError:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")

    def _orchestrator(session_id: str) -> Orchestrator:
        session = _session(session_id)
        with state_lock:
            orc = orchestrators.get(session_id)
            if orc is None:
                orc = Orchestrator(
                    gateway=gateway,
                    catalog=catalog,
                    asset_store=asset_store,
                    engine_config=engine_config,
                    seed=config.seed,
                    scene=session.scene,
                )
                orchestrators[session_id] = orc
        return orc

    async def _broadcast(session_id: str, message: WireMessage) -> None:
        for ws in registry.peers(session_id):
            try:
                await ws.send_text(message.to_json())
            except Exception:
                pass  # dead sockets get removed by their own handler

    def _status(session_id: str, stage: str, detail: dict | None = None) -> WireMessage:
        payload = {"stage": stage}
        payload.update(detail or {})
        return WireMessage(
            type=MessageType.ACK, sender="server", session=session_id, payload=payload
        )

    def _snapshot(session_id: str) -> WireMessage:
        session = _session(session_id)
        return WireMessage(
            type=MessageType.SNAPSHOT,
            sender="server",
            session=session_id,
            server_seq=session.log[-1].server_seq if session.log else 0,
            payload={
                "scene": canonical_scene_text(session.scene),
                "hash": scene_hash(session.scene),
            },
        )

    # ------------------------------------------------------------- basics

    @app.get("/health")
    def health():
        return {"status": "ok", "protocol_version": PROTOCOL_VERSION}

    @app.get("/", response_class=HTMLResponse)
    def root():
        return _INDEX_HTML

    # ----------------------------------------------------------- sessions

    @app.post("/sessions")
    def create_session():
        session = hub.create_session()
        return {"session_id": session.session_id, "hash": session.replica_hash()}

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": hub.session_ids()}

    @app.get("/sessions/{session_id}/scene")
    def get_scene(session_id: str):
        session = _session(session_id)
        return {
            "scene": canonical_scene_text(session.scene),
            "hash": scene_hash(session.scene),
            "revision": session.scene.revision,
        }

    @app.get("/sessions/{session_id}/render")
    def get_render(session_id: str, marks: bool = True):
        session = _session(session_id)
        view = render_topdown(session.scene, marks=marks)
        return Response(content=view.image_png, media_type="image/png")

    # ------------------------------------------------------------ prompts

    @app.post("/sessions/{session_id}/prompt")
    async def run_prompt(session_id: str, body: PromptBody):
        orc = _orchestrator(session_id)
        if not body.prompt.strip():
            raise HTTPException(status_code=400, detail="prompt must be non-empty")
        await _broadcast(
            session_id, _status(session_id, "pipeline_started", {"prompt": body.prompt})
        )
        try:
            outcome = await run_in_threadpool(
                orc.handle_prompt, body.prompt, body.client_id
            )
        except (AllProvidersFailed, SchemaViolation) as exc:
            await _broadcast(
                session_id, _status(session_id, "pipeline_failed", {"error": str(exc)})
            )
            raise HTTPException(status_code=502, detail=str(exc))
        await _broadcast(session_id, _snapshot(session_id))
        await _broadcast(
            session_id,
            _status(
                session_id,
                "pipeline_complete",
                {"revision": orc.scene.revision, "hash": scene_hash(orc.scene)},
            ),
        )
        return {
            "mode": outcome.verdict.mode,
            "created_ids": list(outcome.created_ids),
            "behaviors": [
                {
                    "behavior_id": b.behavior_id,
                    "kind": b.kind,
                    "target_object_id": b.target_object_id,
                }
                for b in outcome.behaviors
            ],
            "errors": list(outcome.errors),
            "revision": outcome.scene_revision,
            "hash": scene_hash(orc.scene),
            "stages": [
                {"name": s.name, "start": s.start, "end": s.end}
                for s in outcome.trace.stages
            ],
            "events": list(outcome.trace.events),
        }

    @app.post("/sessions/{session_id}/sketch")
    async def run_sketch(session_id: str, body: SketchBody):
        orc = _orchestrator(session_id)
        try:
            image = base64.b64decode(body.image_b64, validate=True)
        except (binascii.Error, ValueError):
            raise HTTPException(status_code=400, detail="image_b64 is not valid base64")
        try:
            obj, match = await run_in_threadpool(
                orc.handle_sketch, image, body.client_id, body.hint
            )
        except (TagUnavailable, EmptyCatalog) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        await _broadcast(session_id, _snapshot(session_id))
        return {
            "object_id": obj.id,
            "tag": match.tag,
            "uid": match.hit.uid,
            "download_url": match.hit.download_url,
            "hash": scene_hash(orc.scene),
        }

    # -------------------------------------------------------- asset info

    @app.put("/asset-info/{uid:path}")
    def put_asset_info(uid: str, body: AssetInfoBody):
        from ..core.geometry import Vec3

        record = AssetInfoRecord(
            uid=uid,
            name=body.name,
            download_url=body.download_url,
            location=Vec3(*body.location) if body.location else None,
            source=body.source,
        )
        overwritten = asset_store.put(record)
        return {"uid": uid, "overwritten": overwritten}

    @app.get("/asset-info/{uid:path}")
    def get_asset_info(uid: str):
        try:
            return asset_store.get(uid).to_payload()
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/search")
    def search(body: SearchBody):
        if not body.query.strip():
            raise HTTPException(status_code=400, detail="query must be non-empty")
        try:
            hits = catalog.search(body.query, k=max(1, body.k))
        except EmptyCatalog as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {
            "hits": [
                {
                    "uid": h.uid,
                    "caption": h.caption,
                    "download_url": h.download_url,
                    "score": h.score,
                }
                for h in hits
            ]
        }

    # ---------------------------------------------------------- websocket

    @app.websocket("/ws/{session_id}/{client_id}")
    async def ws_endpoint(ws: WebSocket, session_id: str, client_id: str):
        await ws.accept()
        try:
            session = hub.get(session_id)
        except SyncError as exc:
            await ws.send_text(
                WireMessage(
                    type=MessageType.ERROR,
                    sender="server",
                    payload={"error": type(exc).__name__, "detail": str(exc)},
                ).to_json()
            )
            await ws.close()
            return
        try:
            snapshot = session.join(client_id)
        except SyncError as exc:
            await ws.send_text(
                WireMessage(
                    type=MessageType.ERROR,
                    sender="server",
                    session=session_id,
                    payload={"error": type(exc).__name__, "detail": str(exc)},
                ).to_json()
            )
            await ws.close()
            return

        registry.add(session_id, client_id, ws)
        try:
            await ws.send_text(snapshot.to_json())
            while True:
                text = await ws.receive_text()
                try:
                    message = WireMessage.from_json(text)
                except (ValueError, KeyError) as exc:
                    await ws.send_text(
                        WireMessage(
                            type=MessageType.ERROR,
                            sender="server",
                            session=session_id,
                            payload={"error": "ProtocolError", "detail": str(exc)},
                        ).to_json()
                    )
                    continue
                result = session.submit(message)
                await ws.send_text(result.reply.to_json())
                for broadcast in result.broadcasts:
                    await _broadcast(session_id, broadcast)
        except WebSocketDisconnect:
            pass
        finally:
            registry.remove(session_id, client_id)

    # ------------------------------------------------------------- static

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/app", StaticFiles(directory=str(static_dir), html=True), name="app")

    return app
