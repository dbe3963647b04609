"""Network front door and offline replay.

The WebSocket endpoint speaks the wire protocol one JSON text frame per
message, with a fresh `Session` per connection.  `replay` runs a recorded
stroke log against the same session machinery with no clock and no
network, so a log replays to byte-identical output every time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from . import corpus
from .config import Config
from .protocol import (
    PROTOCOL_VERSION,
    ClientMessage,
    Error,
    LoadProgram,
    ProtocolError,
    ServerMessage,
    decode,
    encode,
    parse_log,
)
from .recognizer import GestureTemplate
from .session import Session


def _make_session(config: Config | None,
                  templates: Sequence[GestureTemplate] | None) -> Session:
    cfg = config or Config()
    return Session(templates=templates,
                   spiral_params=cfg.spiral_params(),
                   threshold=cfg.score_threshold,
                   min_extent=cfg.min_extent,
                   limits=cfg.limits())


@dataclass
class ReplayResult:
    report: dict
    messages: list[ServerMessage]
    session: Session

    def transcript(self) -> str:
        """One encoded server message per line; stable across runs."""
        return "".join(encode(m) + "\n" for m in self.messages)

    def report_json(self) -> str:
        return json.dumps(self.report, sort_keys=True,
                          separators=(",", ":")) + "\n"


def replay(log_text: str, source: str | None = None, *,
           config: Config | None = None,
           templates: Sequence[GestureTemplate] | None = None) -> ReplayResult:
    """Feed a recorded client log through a fresh session.

    The log's header names the program and mode.  If the log itself
    carries no `load` record, one is synthesized from the header (the
    program name must then be a bundled corpus entry unless `source` is
    given).  An explicit `source` also overrides the source of any
    recorded loads, which is how a gesture log gets replayed against a
    different program.
    """
    header, recorded = parse_log(log_text)
    todo: list[ClientMessage] = list(recorded)
    if not any(isinstance(m, LoadProgram) for m in todo):
        if source is None:
            try:
                source = corpus.load(header.program)
            except KeyError:
                raise ProtocolError(
                    f"log references unknown program {header.program!r}; "
                    f"supply its source") from None
        todo.insert(0, LoadProgram(source=source,
                                   gutter_geometry=header.gutter_geometry,
                                   mode=header.mode))
    session = _make_session(config, templates)
    out: list[ServerMessage] = []
    for msg in todo:
        if isinstance(msg, LoadProgram):
            if msg.mode != header.mode:
                raise ProtocolError(
                    f"log header mode {header.mode!r} does not match "
                    f"load mode {msg.mode!r}")
            if source is not None and msg.source != source:
                msg = LoadProgram(source=source,
                                  gutter_geometry=msg.gutter_geometry,
                                  mode=msg.mode)
        out.extend(session.handle(msg))
    return ReplayResult(report=session.report(), messages=out,
                        session=session)


def build_app(config: Config | None = None,
              templates: Sequence[GestureTemplate] | None = None) -> FastAPI:
    app = FastAPI(title="sketchdbg")

    @app.get("/")
    def info() -> dict:
        return {"service": "sketchdbg",
                "protocolVersion": PROTOCOL_VERSION,
                "programs": list(corpus.PROGRAMS)}

    @app.get("/programs/{name}")
    def program(name: str) -> dict:
        try:
            return {"name": name, "source": corpus.load(name)}
        except KeyError:
            raise HTTPException(status_code=404,
                                detail=f"unknown program {name!r}")

    @app.websocket("/ws")
    async def ws(websocket: WebSocket) -> None:
        await websocket.accept()
        session = _make_session(config, templates)
        try:
            while True:
                text = await websocket.receive_text()
                try:
                    replies = session.handle(decode(text))
                except (ProtocolError, ValueError) as e:
                    # bad frame: report it, keep the connection alive
                    replies = [Error(str(e))]
                for r in replies:
                    await websocket.send_text(encode(r))
        except WebSocketDisconnect:
            pass

    return app


def serve(host: str = "127.0.0.1", port: int = 8765, *,
          config: Config | None = None,
          templates: Sequence[GestureTemplate] | None = None) -> None:
    import uvicorn

    uvicorn.run(build_app(config, templates), host=host, port=port)
