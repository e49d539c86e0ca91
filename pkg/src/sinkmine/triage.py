"""Reviewer feedback over refined predictions: ban, ban-similar, hide, export.

All mutations append to an audit log (JSON Lines when a path is given).
Replaying the log from an empty state reproduces the feedback sets
exactly; ban-similar entries record alpha and the similar set is
recomputed at replay time, which is safe because the embeddings are
deterministic.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .predictor import PredictedSink
from .similarity import PredictionEmbeddings, UnknownPrediction, get_similar


class UnknownRepresentation(KeyError):
    pass


# actions a reviewer can take; hide/unhide encode the toggle direction so an
# audit entry stays a flat (ts, action, target, alpha?) record
BAN = "ban"
BAN_SIMILAR = "ban_similar"
UNBAN = "unban"
HIDE_REP = "hide_rep"
UNHIDE_REP = "unhide_rep"
ACCEPT = "accept"
_ACTIONS = {BAN, BAN_SIMILAR, UNBAN, HIDE_REP, UNHIDE_REP, ACCEPT}
STEP_ACTIONS = {BAN, BAN_SIMILAR}  # reviewer visits that count as triage steps


@dataclass
class AuditEntry:
    ts: float
    action: str
    target: str
    alpha: float | None = None

    def to_json(self) -> str:
        record = {"ts": self.ts, "action": self.action, "target": self.target}
        if self.alpha is not None:
            record["alpha"] = self.alpha
        return json.dumps(record, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "AuditEntry":
        record = json.loads(line)
        return cls(ts=record["ts"], action=record["action"],
                   target=record["target"], alpha=record.get("alpha"))


@dataclass
class FeedbackState:
    banned: set[str] = field(default_factory=set)
    hidden_reps: set[str] = field(default_factory=set)
    accepted: set[str] = field(default_factory=set)
    audit: list[AuditEntry] = field(default_factory=list)


class TriageSession:
    """Single-writer feedback over one refined prediction set."""

    def __init__(self, predictions: list[PredictedSink],
                 e_p: PredictionEmbeddings,
                 audit_path: str | Path | None = None):
        self.predictions = sorted(predictions, key=lambda p: (-p.score, p.id))
        self.e_p = e_p
        self.by_id = {p.id: p for p in self.predictions}
        self.reps = {p.rep for p in self.predictions}
        self.state = FeedbackState()
        self.audit_path = Path(audit_path) if audit_path else None
        if self.audit_path and self.audit_path.exists():
            for line in self.audit_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._apply(AuditEntry.from_json(line), record=False)

    # ------------------------------------------------------------- actions

    def ban(self, pred_id: str) -> set[str]:
        self._require_prediction(pred_id)
        self._apply(AuditEntry(time.time(), BAN, pred_id))
        return {pred_id}

    def ban_similar(self, pred_id: str, alpha: float) -> set[str]:
        self._require_prediction(pred_id)
        entry = AuditEntry(time.time(), BAN_SIMILAR, pred_id, alpha=alpha)
        return self._apply(entry)

    def unban(self, pred_id: str) -> None:
        self._require_prediction(pred_id)
        self._apply(AuditEntry(time.time(), UNBAN, pred_id))

    def accept(self, pred_id: str) -> None:
        self._require_prediction(pred_id)
        self._apply(AuditEntry(time.time(), ACCEPT, pred_id))

    def toggle_representation(self, rep: str, hidden: bool) -> None:
        if rep not in self.reps:
            raise UnknownRepresentation(rep)
        self._apply(AuditEntry(time.time(), HIDE_REP if hidden else UNHIDE_REP, rep))

    # --------------------------------------------------------------- views

    def visible(self) -> list[PredictedSink]:
        return [p for p in self.predictions
                if p.id not in self.state.banned
                and p.rep not in self.state.hidden_reps]

    def representation_counts(self) -> list[dict]:
        counts: dict[str, int] = {}
        for p in self.predictions:
            counts[p.rep] = counts.get(p.rep, 0) + 1
        rows = [{"rep": rep, "count": n, "hidden": rep in self.state.hidden_reps}
                for rep, n in counts.items()]
        rows.sort(key=lambda r: (-r["count"], r["rep"]))
        return rows

    def export_final(self) -> dict:
        """Visible predictions plus one deduplicated snk spec per rep."""
        sinks = self.visible()
        best: dict[str, float] = {}
        for p in sinks:
            best[p.rep] = max(best.get(p.rep, 0.0), p.score)
        specs = [{"rep": rep, "kind": "snk", "score": best[rep]}
                 for rep in sorted(best)]
        return {
            "sinks": [{"id": p.id, "project": p.project, "path": p.path,
                       "span": list(p.span), "rep": p.rep, "score": p.score,
                       "stmt": p.stmt, "func": p.func} for p in sinks],
            "specs": specs,
        }

    def stats(self) -> dict:
        steps = sum(1 for e in self.state.audit if e.action in STEP_ACTIONS)
        return {"total": len(self.predictions),
                "visible": len(self.visible()),
                "banned": len(self.state.banned),
                "hidden_reps": len(self.state.hidden_reps),
                "steps_taken": steps}

    # ------------------------------------------------------------ internals

    def _require_prediction(self, pred_id: str) -> None:
        if pred_id not in self.by_id:
            raise UnknownPrediction(pred_id)

    def _ban_ids(self, ids: set[str]) -> None:
        self.state.banned.update(ids)
        self.state.accepted.difference_update(ids)

    def _apply(self, entry: AuditEntry, record: bool = True) -> set[str]:
        if entry.action not in _ACTIONS:
            raise ValueError(f"unknown audit action {entry.action!r}")
        dismissed: set[str] = set()
        if entry.action == BAN:
            dismissed = {entry.target}
            self._ban_ids(dismissed)
        elif entry.action == BAN_SIMILAR:
            similar = get_similar(entry.target, self.predictions, self.e_p,
                                  entry.alpha)
            dismissed = {entry.target} | similar
            self._ban_ids(dismissed)
        elif entry.action == UNBAN:
            self.state.banned.discard(entry.target)
        elif entry.action == ACCEPT:
            self.state.accepted.add(entry.target)
            self.state.banned.discard(entry.target)
        elif entry.action == HIDE_REP:
            self.state.hidden_reps.add(entry.target)
        elif entry.action == UNHIDE_REP:
            self.state.hidden_reps.discard(entry.target)
        self.state.audit.append(entry)
        if record and self.audit_path:
            with open(self.audit_path, "a", encoding="utf-8") as fh:
                fh.write(entry.to_json() + "\n")
        return dismissed

    @classmethod
    def replay(cls, predictions: list[PredictedSink], e_p: PredictionEmbeddings,
               audit_path: str | Path) -> "TriageSession":
        """Rebuild a session purely from its audit log."""
        return cls(predictions, e_p, audit_path=audit_path)
