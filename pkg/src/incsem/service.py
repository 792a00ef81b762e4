"""Session-per-client HTTP service for the workbench UI.

Routes (JSON in/out):

    POST   /sessions                {"lexicon": name?, "world": name?,
                                     "domain_k"?: int, "s_modifiers"?: bool}
    GET    /sessions/{id}           snapshot
    POST   /sessions/{id}/words     {"word": "..."} -> snapshot
    POST   /sessions/{id}/undo      snapshot
    DELETE /sessions/{id}

Snapshots are complete (stateless clients).  Requests to one session are
serialized; distinct sessions run concurrently.
"""

from __future__ import annotations

import argparse
import os
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from incsem.lexicon import Lexicon, UnknownWordError, load_lexicon_file
from incsem.parser import DeadEndError, NothingToUndoError
from incsem.session import (
    BlockedSessionError, NoCompleteParseError, SessionState, feed_word,
    new_session, snapshot, undo_word,
)
from incsem.world import WorldModel, load_world_file


class CreateSession(BaseModel):
    lexicon: str = "demo"
    world: str = "london"
    domain_k: int = 3
    s_modifiers: bool = False


class FeedWord(BaseModel):
    word: str


@dataclass
class SessionHandle:
    id: str
    created: float
    state: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    touched: float = 0.0


def _default_data_dir() -> str:
    from importlib import resources
    return str(resources.files("incsem").joinpath("data"))


def create_app(lexicon_dir: str | None = None, world_dir: str | None = None,
               session_ttl: float = 3600.0) -> FastAPI:
    lexicon_dir = lexicon_dir or _default_data_dir()
    world_dir = world_dir or _default_data_dir()
    app = FastAPI(title="incsem session service")
    sessions: dict[str, SessionHandle] = {}
    table_lock = threading.Lock()
    lexicons: dict[str, Lexicon] = {}
    worlds: dict[str, WorldModel] = {}

    def get_lexicon(name: str) -> Lexicon:
        if name not in lexicons:
            path = os.path.join(lexicon_dir, f"{name}.lex")
            if not os.path.exists(path):
                raise HTTPException(status_code=404, detail=f"unknown lexicon '{name}'")
            lexicons[name] = load_lexicon_file(path)
        return lexicons[name]

    def get_world(name: str) -> WorldModel:
        if name not in worlds:
            path = os.path.join(world_dir, f"{name}.world")
            if not os.path.exists(path):
                raise HTTPException(status_code=404, detail=f"unknown world '{name}'")
            worlds[name] = load_world_file(path, name)
        return worlds[name]

    def expire_idle() -> None:
        now = time.monotonic()
        with table_lock:
            for sid in [s for s, h in sessions.items()
                        if now - h.touched > session_ttl]:
                del sessions[sid]

    def handle(sid: str) -> SessionHandle:
        expire_idle()
        with table_lock:
            h = sessions.get(sid)
        if h is None:
            raise HTTPException(status_code=404, detail=f"unknown session '{sid}'")
        h.touched = time.monotonic()
        return h

    @app.post("/sessions", status_code=201)
    def create(req: CreateSession) -> dict:
        expire_idle()
        state = new_session(get_lexicon(req.lexicon), get_world(req.world),
                            domain_k=req.domain_k, s_modifiers=req.s_modifiers)
        sid = uuid.uuid4().hex
        h = SessionHandle(id=sid, created=time.time(), state=state,
                          touched=time.monotonic())
        with table_lock:
            sessions[sid] = h
        return {"id": sid, "snapshot": snapshot(state)}

    @app.get("/sessions/{sid}")
    def get(sid: str) -> dict:
        h = handle(sid)
        with h.lock:
            return {"id": sid, "snapshot": snapshot(h.state)}

    @app.post("/sessions/{sid}/words")
    def feed(sid: str, req: FeedWord) -> dict:
        h = handle(sid)
        with h.lock:
            try:
                h.state = feed_word(h.state, req.word)
            except UnknownWordError as e:
                raise HTTPException(
                    status_code=422,
                    detail={"error": str(e), "suggestions": e.suggestions})
            except (DeadEndError, NoCompleteParseError) as e:
                raise HTTPException(status_code=409, detail=str(e))
            except BlockedSessionError as e:
                raise HTTPException(status_code=409, detail=str(e))
            return {"id": sid, "snapshot": snapshot(h.state)}

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str) -> dict:
        h = handle(sid)
        with h.lock:
            try:
                h.state = undo_word(h.state)
            except NothingToUndoError as e:
                raise HTTPException(status_code=409, detail=str(e))
            return {"id": sid, "snapshot": snapshot(h.state)}

    @app.delete("/sessions/{sid}", status_code=204)
    def remove(sid: str) -> None:
        handle(sid)
        with table_lock:
            sessions.pop(sid, None)

    return app


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(prog="incsem-service")
    p.add_argument("--port", type=int, default=8940)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--lexicon-dir", default=None)
    p.add_argument("--world-dir", default=None)
    p.add_argument("--session-ttl", type=float, default=3600.0)
    args = p.parse_args(argv)
    import uvicorn
    app = create_app(args.lexicon_dir, args.world_dir, args.session_ttl)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    main()
