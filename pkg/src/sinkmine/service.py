"""Triage HTTP API over a single reviewer session.

Mutations are serialized through one lock; the session applies them in
arrival order. Listing defaults to the visible set (not banned, rep not
hidden); include_banned=true re-adds banned rows flagged as such.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .similarity import UnknownPrediction
from .triage import TriageSession, UnknownRepresentation

DEFAULT_ALPHA = 0.95


class BanSimilarBody(BaseModel):
    alpha: float = Field(default=DEFAULT_ALPHA, ge=0.0, le=1.0)


class ToggleBody(BaseModel):
    rep: str
    hidden: bool


def _row(session: TriageSession, p) -> dict:
    return {"id": p.id, "rep": p.rep, "score": p.score,
            "stmt": p.stmt, "func": p.func,
            "banned": p.id in session.state.banned}


def create_app(session: TriageSession) -> FastAPI:
    app = FastAPI(title="sink triage")
    lock = threading.Lock()

    @app.get("/api/predictions")
    def list_predictions(min_score: float = 0.0, include_banned: bool = False,
                         rep: str | None = None) -> list[dict]:
        rows = []
        for p in session.predictions:
            if p.rep in session.state.hidden_reps:
                continue
            if not include_banned and p.id in session.state.banned:
                continue
            if rep is not None and p.rep != rep:
                continue
            if p.score < min_score:
                continue
            rows.append(_row(session, p))
        return rows

    @app.get("/api/representations")
    def list_representations() -> list[dict]:
        return session.representation_counts()

    @app.post("/api/predictions/{pred_id}/ban")
    def ban(pred_id: str) -> dict:
        with lock:
            try:
                dismissed = session.ban(pred_id)
            except UnknownPrediction:
                raise HTTPException(status_code=404, detail="unknown prediction")
        return {"dismissed": sorted(dismissed)}

    @app.post("/api/predictions/{pred_id}/ban-similar")
    def ban_similar(pred_id: str, body: BanSimilarBody) -> dict:
        with lock:
            try:
                dismissed = session.ban_similar(pred_id, body.alpha)
            except UnknownPrediction:
                raise HTTPException(status_code=404, detail="unknown prediction")
        return {"dismissed": sorted(dismissed)}

    @app.post("/api/predictions/{pred_id}/unban")
    def unban(pred_id: str) -> dict:
        with lock:
            try:
                session.unban(pred_id)
            except UnknownPrediction:
                raise HTTPException(status_code=404, detail="unknown prediction")
        return {"restored": [pred_id]}

    @app.post("/api/representations/toggle")
    def toggle(body: ToggleBody) -> dict:
        with lock:
            try:
                session.toggle_representation(body.rep, body.hidden)
            except UnknownRepresentation:
                raise HTTPException(status_code=404, detail="unknown representation")
        return {"rep": body.rep, "hidden": body.hidden}

    @app.get("/api/export")
    def export() -> dict:
        return session.export_final()

    @app.get("/api/stats")
    def stats() -> dict:
        return session.stats()

    return app
