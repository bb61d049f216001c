"""Streaming duplex session API.

One websocket at ``/ws`` carries the whole session. Messages are JSON,
one object per websocket text frame.

Client to engine:
    {"type": "utterance", "text": "What's my next step?"}
    {"type": "frames", "records": [{"t": 0.5, "descriptor": [0.8, 0.1, 0.1]}]}
    {"type": "command", "command": "pause"}
    {"type": "config", "tts_speed": 1.5}
    {"type": "advance", "seconds": 2.0}        # simulated clock only
    {"type": "sync", "after": 0}               # re-deliver outbound after id

Engine to client (every message carries a unique, increasing record_id):
    {"kind": "state_change", "record_id": 3, "t": 4.0, "from_state": "S0", "to_state": "S2", "event": "E2", "progress": {"current_step": 3, "total_steps": 7, "completed": [0, 1], "skipped": []}}
    {"kind": "response", "record_id": 4, "t": 4.0, "response_id": 1, "state": "S2", "text": "...", "evidence": [{"sentence": 3, "t_start": 41.2, "t_end": 48.0}], "sources": [2]}
    {"kind": "alert", "record_id": 5, "t": 6.0, "event": "E5", "judgment_id": 3, "text": "It appears you have missed step 2 (...).", "progress": {"current_step": 3, "total_steps": 7, "completed": [0, 1], "skipped": []}}
    {"kind": "playback", "record_id": 6, "t": 7.0, "status": "playing", "segment": {"sentence": 3, "t_start": 41.2, "t_end": 48.0}, "position": 41.2, "queue_length": 2, "separator_cue": 0.5}
    {"kind": "tts", "record_id": 7, "t": 7.5, "response_id": 1, "audio_ref": "audio:1", "speed": 1.0, "failed": false}
    {"kind": "error", "record_id": 8, "t": 8.0, "code": "InvalidCommand", "text": "resume with empty queue"}
"""

from __future__ import annotations

import json

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from ..clock import SimulatedClock
from ..errors import InvalidCommand, StartupFailure
from ..media import PlaybackCommand
from .. import media
from .engine import Session

ENGINE_MESSAGE_KINDS = ("state_change", "response", "alert", "playback", "tts", "error")


def handle_client_message(session: Session, message: dict) -> None:
    """Apply one client message to the session; errors become error messages."""
    msg_type = message.get("type")
    try:
        if msg_type == "utterance":
            result = session.ingest_utterance(message["text"])
            if result.envelope is not None:
                session.speak(result.envelope)
        elif msg_type == "frames":
            session.ingest_frames(message["records"])
        elif msg_type == "command":
            cmd = PlaybackCommand(message["command"])
            segments = session._last_evidence if cmd is PlaybackCommand.PLAY else None
            session.playback = media.control(cmd, session.playback, segments)
            session._emit_playback()
        elif msg_type == "config":
            if "tts_speed" in message:
                speed = float(message["tts_speed"])
                if not 0.5 <= speed <= 3.0:
                    raise ValueError("tts_speed must be within [0.5, 3.0]")
                session.cfg.tts_speed = speed
        elif msg_type == "advance":
            if isinstance(session.clock, SimulatedClock):
                session.advance(float(message["seconds"]))
        elif msg_type == "sync":
            pass  # handled by the websocket loop via drain_outbound
        else:
            raise ValueError(f"unknown message type {msg_type!r}")
    except (InvalidCommand, ValueError, KeyError) as exc:
        session._emit("error", code=type(exc).__name__, text=str(exc))


def create_app(session: Session) -> FastAPI:
    """One session per process; the websocket is the only surface."""
    app = FastAPI(title="mica session")
    app.state.session = session

    @app.get("/health")
    def health():
        return {"ok": True, **session.snapshot()}

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        delivered = 0
        try:
            for message in session.drain_outbound():
                await ws.send_text(json.dumps(message, sort_keys=True))
                delivered = message["record_id"]
            while True:
                raw = await ws.receive_text()
                try:
                    message = json.loads(raw)
                except json.JSONDecodeError:
                    session._emit("error", code="BadMessage", text="not valid JSON")
                    message = {}
                if message.get("type") == "sync":
                    delivered = min(delivered, int(message.get("after", 0)))
                elif message:
                    handle_client_message(session, message)
                for outbound in session.drain_outbound(after=delivered):
                    await ws.send_text(json.dumps(outbound, sort_keys=True))
                    delivered = outbound["record_id"]
        except WebSocketDisconnect:
            return

    return app


def serve(session: Session, host: str = "127.0.0.1", port: int = 8757) -> None:
    import uvicorn

    if session is None:
        raise StartupFailure("no session to serve")
    uvicorn.run(create_app(session), host=host, port=port)
