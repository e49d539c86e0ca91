"""Code embeddings and similarity-based refinement of sink predictions.

Each prediction carries the text of its enclosing statement and function.
Both snippets are embedded; a prediction's similarity evidence is the max
cosine against the known sinks sharing its representation, and its refined
score averages that evidence with the solver score:

    refined = (p + (Z_stmt + Z_func) / 2) / 2

The default embedder hashes token n-grams into a fixed-width vector, so
the whole pipeline is deterministic and dependency-free. Precomputed
vectors (e.g. from a neural encoder run offline) can be swapped in via
FileEmbeddingLoader.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from .frontend.elements import fnv1a64
from .frontend.lexer import JsSyntaxError, tokenize
from .predictor import PredictedSink

log = logging.getLogger(__name__)

DIM = 256
CHUNK_SIZE = 1000  # records per embedding store file

_FALLBACK_TOKEN = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*|\d+(?:\.\d+)?|\S")


class UnknownPrediction(KeyError):
    pass


class Embedder(Protocol):
    def embed(self, code: str) -> np.ndarray: ...


def _tokens(code: str) -> list[str]:
    try:
        return [t.text for t in tokenize(code) if t.kind != "eof"]
    except JsSyntaxError:
        return _FALLBACK_TOKEN.findall(code)


class TokenHashEmbedder:
    """Hashed bag of token 1-3-grams, term-frequency weighted, L2-normalized."""

    def __init__(self, dim: int = DIM):
        self.dim = dim

    def embed(self, code: str) -> np.ndarray:
        vec = np.zeros(self.dim)
        if not code.split():
            return vec
        toks = _tokens(code)
        for n in (1, 2, 3):
            for i in range(len(toks) - n + 1):
                gram = "\x00".join(toks[i:i + n]).encode("utf-8")
                vec[fnv1a64(gram) % self.dim] += 1.0
        norm = float(np.linalg.norm(vec))
        return vec / norm if norm > 0 else vec


def normalize_code(code: str) -> str:
    return " ".join(code.split())


def code_key(code: str) -> str:
    """Stable lookup key for externally precomputed embeddings."""
    return hashlib.sha256(normalize_code(code).encode("utf-8")).hexdigest()


class FileEmbeddingLoader:
    """Serves vectors precomputed offline, keyed by sha256 of the snippet.

    Store records hold stmt_vec only (one vector per snippet key); a miss
    falls back to the zero vector with a warning so refinement degrades
    instead of crashing.
    """

    def __init__(self, path: str | Path, dim: int = DIM):
        self.dim = dim
        self.vectors: dict[str, np.ndarray] = {}
        for record in read_store(Path(path)):
            self.vectors[record["key"]] = np.asarray(record["stmt_vec"], dtype=float)

    def embed(self, code: str) -> np.ndarray:
        key = code_key(code)
        vec = self.vectors.get(key)
        if vec is None:
            log.warning("no precomputed embedding for key %s; using zero vector", key)
            return np.zeros(self.dim)
        return vec


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return min(1.0, max(-1.0, float(np.dot(u, v) / (nu * nv))))


# E_K: rep -> [(stmt_vec, func_vec)], E_P: prediction id -> (stmt_vec, func_vec)
KnownSinkEmbeddings = dict[str, list[tuple[np.ndarray, np.ndarray]]]
PredictionEmbeddings = dict[str, tuple[np.ndarray, np.ndarray]]


def precompute_known(known_rows: list[tuple[str, str, str]],
                     embedder: Embedder) -> KnownSinkEmbeddings:
    """Embed known sinks given as (rep, stmt_text, func_text) rows.

    Rows from several seed-spec files pool into one map, so evidence
    gathered for one query benefits every other.
    """
    e_k: KnownSinkEmbeddings = {}
    for rep, stmt, func in known_rows:
        e_k.setdefault(rep, []).append((embedder.embed(stmt), embedder.embed(func)))
    return e_k


def compute_similarity_score(pred: PredictedSink, e_k: KnownSinkEmbeddings,
                             embedder: Embedder) -> tuple[float, float]:
    """Max cosine against same-rep known sinks; (0, 0) when the rep is new."""
    pairs = e_k.get(pred.rep)
    if not pairs:
        return 0.0, 0.0
    stmt_vec = embedder.embed(pred.stmt)
    func_vec = embedder.embed(pred.func)
    z_stmt = max(cosine(stmt_vec, s) for s, _ in pairs)
    z_func = max(cosine(func_vec, f) for _, f in pairs)
    return z_stmt, z_func


def refined_score(p: float, z_stmt: float, z_func: float) -> float:
    value = (p + (z_stmt + z_func) / 2.0) / 2.0
    return min(1.0, max(0.0, value))


def refine(predictions: list[PredictedSink], e_k: KnownSinkEmbeddings,
           embedder: Embedder) -> tuple[list[PredictedSink], PredictionEmbeddings]:
    """Rescore every prediction against the known-sink evidence.

    Returns the re-sorted prediction list (score descending, ties by id)
    and the embeddings of each prediction for later similarity queries.
    """
    e_p: PredictionEmbeddings = {}
    refined: list[PredictedSink] = []
    for pred in predictions:
        stmt_vec = embedder.embed(pred.stmt)
        func_vec = embedder.embed(pred.func)
        e_p[pred.id] = (stmt_vec, func_vec)
        pairs = e_k.get(pred.rep)
        if pairs:
            z_stmt = max(cosine(stmt_vec, s) for s, _ in pairs)
            z_func = max(cosine(func_vec, f) for _, f in pairs)
        else:
            z_stmt = z_func = 0.0
        refined.append(PredictedSink(
            id=pred.id, project=pred.project, path=pred.path, span=pred.span,
            rep=pred.rep, score=refined_score(pred.score, z_stmt, z_func),
            stmt=pred.stmt, func=pred.func))
    refined.sort(key=lambda p: (-p.score, p.id))
    return refined, e_p


def get_similar(pred_id: str, predictions: list[PredictedSink],
                e_p: PredictionEmbeddings, alpha: float) -> set[str]:
    """Ids of other same-rep predictions with mean similarity strictly > alpha."""
    by_id = {p.id: p for p in predictions}
    if pred_id not in by_id or pred_id not in e_p:
        raise UnknownPrediction(pred_id)
    center = by_id[pred_id]
    c_stmt, c_func = e_p[pred_id]
    out: set[str] = set()
    for p in predictions:
        if p.id == pred_id or p.rep != center.rep:
            continue
        s_vec, f_vec = e_p[p.id]
        mean = (cosine(c_stmt, s_vec) + cosine(c_func, f_vec)) / 2.0
        if mean > alpha:
            out.add(p.id)
    return out


# ---------------------------------------------------------------- store IO

def write_store(records: list[dict], directory: Path, prefix: str) -> Path:
    """Persist embedding records in chunks of <= CHUNK_SIZE plus a manifest.

    Each record needs `key`, `stmt_vec`, `func_vec`; known-sink records also
    carry `rep`. Returns the manifest path.
    """
    directory.mkdir(parents=True, exist_ok=True)
    chunk_names = []
    for start in range(0, len(records), CHUNK_SIZE):
        chunk = records[start:start + CHUNK_SIZE]
        name = f"{prefix}.{start // CHUNK_SIZE:04d}.jsonl"
        with open(directory / name, "w", encoding="utf-8") as fh:
            for record in chunk:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        chunk_names.append(name)
    manifest = directory / f"{prefix}.manifest.json"
    manifest.write_text(json.dumps(
        {"chunks": chunk_names, "records": len(records)}, sort_keys=True) + "\n",
        encoding="utf-8")
    return manifest


def read_store(manifest: Path) -> list[dict]:
    meta = json.loads(manifest.read_text(encoding="utf-8"))
    records: list[dict] = []
    for name in meta["chunks"]:
        with open(manifest.parent / name, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    records.append(json.loads(line))
    return records


def store_records_for_known(e_k: KnownSinkEmbeddings) -> list[dict]:
    records = []
    for rep in sorted(e_k):
        for i, (stmt_vec, func_vec) in enumerate(e_k[rep]):
            records.append({"key": f"{rep}#{i}", "rep": rep,
                            "stmt_vec": [round(x, 9) for x in stmt_vec.tolist()],
                            "func_vec": [round(x, 9) for x in func_vec.tolist()]})
    return records


def store_records_for_predictions(e_p: PredictionEmbeddings) -> list[dict]:
    records = []
    for pid in sorted(e_p):
        stmt_vec, func_vec = e_p[pid]
        records.append({"key": pid,
                        "stmt_vec": [round(x, 9) for x in stmt_vec.tolist()],
                        "func_vec": [round(x, 9) for x in func_vec.tolist()]})
    return records
