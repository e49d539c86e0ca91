"""Stage orchestration and file artifacts.

Stages communicate exclusively through JSON Lines artifacts in the output
directory, so each can be re-run on its own:

    mine     corpus/              -> elements.jsonl graphs.jsonl triples.jsonl
    infer    elements, triples    -> specs.jsonl (+ lp/<project>.txt dumps)
    predict  specs, test corpus   -> predictions.jsonl
    refine   predictions, seeds   -> refined.jsonl, ek.*/ep.* stores

All artifact writes are deterministic: projects, records, and map keys are
sorted, scores rounded to 6 decimals. Re-running on identical inputs must
produce byte-identical files.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .frontend import parse_source
from .frontend.elements import ExtractionResult
from .frontend.lexer import JsSyntaxError
from .inference import average_specs, build_constraints, dump_lp, solve_system
from .predictor import PredictedSink, get_sinks, sink_candidates
from .propagation import (FlowTriple, TripleExplosion, build_graph, mine_triples)
from .representations import annotate
from .similarity import (FileEmbeddingLoader, TokenHashEmbedder, precompute_known,
                         read_store, refine, store_records_for_known,
                         store_records_for_predictions, write_store)

log = logging.getLogger(__name__)


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, project: str, cause: BaseException):
        super().__init__(f"stage {stage} failed for {project}: {cause}")
        self.stage = stage
        self.project = project
        self.cause = cause


# ------------------------------------------------------------- corpus load

def load_corpus(corpus_dir: str | Path) -> list[tuple[str, list[tuple[str, str]]]]:
    """Projects under <corpus>/<project_id>/**.js, everything sorted."""
    root = Path(corpus_dir)
    projects = []
    if not root.is_dir():
        return projects
    for proj_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        files = []
        for js in sorted(proj_dir.rglob("*.js")):
            files.append((js.relative_to(proj_dir).as_posix(),
                          js.read_text(encoding="utf-8")))
        projects.append((proj_dir.name, files))
    return projects


def parse_project(project: str, files: list[tuple[str, str]]) -> list[ExtractionResult]:
    """Parse and annotate every file; unparseable files are skipped loudly."""
    extractions = []
    for path, text in files:
        try:
            extraction = parse_source(project, path, text)
        except JsSyntaxError as err:
            log.warning("skipping %s/%s: %s", project, path, err)
            continue
        annotate(extraction)
        extractions.append(extraction)
    return extractions


# ------------------------------------------------------------ artifact IO

def write_jsonl(path: Path, records: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_jsonl(path: Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records


def read_seed_specs(path: str | Path) -> list[dict]:
    return read_jsonl(Path(path))


def element_rows(extractions: list[ExtractionResult]) -> list[dict]:
    rows = []
    for extraction in extractions:
        for el in extraction.elements:
            stmt, func = extraction.enclosing_code(el.id)
            rows.append({"id": el.id, "project": el.project, "path": el.path,
                         "span": [el.start, el.end], "kind": el.kind,
                         "rep": el.rep, "stmt": stmt, "func": func})
    rows.sort(key=lambda r: (r["path"], r["span"], r["kind"]))
    return rows


def prediction_rows(predictions: list[PredictedSink]) -> list[dict]:
    return [{"id": p.id, "project": p.project, "path": p.path,
             "span": list(p.span), "rep": p.rep, "score": round(p.score, 6),
             "stmt": p.stmt, "func": p.func} for p in predictions]


def load_predictions(path: Path) -> list[PredictedSink]:
    return [PredictedSink(id=r["id"], project=r["project"], path=r["path"],
                          span=tuple(r["span"]), rep=r["rep"], score=r["score"],
                          stmt=r["stmt"], func=r["func"])
            for r in read_jsonl(path)]


def load_ep_store(manifest: Path) -> dict:
    e_p = {}
    for record in read_store(manifest):
        e_p[record["key"]] = (np.asarray(record["stmt_vec"], dtype=float),
                              np.asarray(record["func_vec"], dtype=float))
    return e_p


def make_embedder(config: PipelineConfig):
    if config.embeddings == "token-hash":
        return TokenHashEmbedder()
    return FileEmbeddingLoader(config.embeddings.removeprefix("file:"))


# ----------------------------------------------------------------- stages

def run_mine(config: PipelineConfig) -> dict:
    out = Path(config.out)
    projects = load_corpus(config.corpus)

    def one(item):
        project, files = item
        try:
            extractions = parse_project(project, files)
            elements = [el for x in extractions for el in x.elements]
            graph = build_graph(project, extractions)
            triples = mine_triples(graph, elements)
        except TripleExplosion:
            raise
        except Exception as err:
            raise PipelineStageError("mine", project, err)
        return (element_rows(extractions),
                {"project": project,
                 "nodes": sorted(graph.nodes),
                 "edges": sorted([a, b] for a, b in graph.edges)},
                [{"project": project, "src": t.src, "san": t.san, "snk": t.snk}
                 for t in triples])

    with ThreadPoolExecutor(max_workers=config.jobs) as ex:
        results = list(ex.map(one, projects))

    all_elements, graph_records, all_triples = [], [], []
    for elems, graph, triples in results:
        all_elements.extend(elems)
        graph_records.append(graph)
        all_triples.extend(triples)
    write_jsonl(out / "elements.jsonl", all_elements)
    write_jsonl(out / "graphs.jsonl", graph_records)
    write_jsonl(out / "triples.jsonl", all_triples)
    return {"projects": len(projects), "elements": len(all_elements),
            "triples": len(all_triples)}


def run_infer(config: PipelineConfig) -> dict:
    out = Path(config.out)
    elements = read_jsonl(out / "elements.jsonl")
    triples = read_jsonl(out / "triples.jsonl")
    seeds = read_seed_specs(config.seeds[0]) if config.seeds else []
    rep_of = {r["id"]: r["rep"] for r in elements}

    by_project: dict[str, list[FlowTriple]] = {}
    for r in triples:
        by_project.setdefault(r["project"], []).append(
            FlowTriple(r["src"], r["san"], r["snk"]))
    project_names = sorted(by_project)

    def one(project: str):
        try:
            system = build_constraints(by_project[project], rep_of, seeds,
                                       c_param=config.c, lam=config.lam)
            result = solve_system(system)
        except Exception as err:
            raise PipelineStageError("infer", project, err)
        scores: dict[str, dict[str, float]] = {}
        for (rep, kind), value in result.scores.items():
            scores.setdefault(rep, {})[kind] = value
        return scores, dump_lp(system)

    with ThreadPoolExecutor(max_workers=config.jobs) as ex:
        results = list(ex.map(one, project_names))

    lp_dir = out / "lp"
    lp_dir.mkdir(parents=True, exist_ok=True)
    per_project = []
    for project, (scores, dump) in zip(project_names, results):
        per_project.append(scores)
        (lp_dir / f"{project}.txt").write_text(dump, encoding="utf-8")

    specs = average_specs(per_project)
    for s in specs:
        s["score"] = round(s["score"], 6)
    write_jsonl(out / "specs.jsonl", specs)
    return {"projects": len(project_names), "specs": len(specs)}


def run_predict(config: PipelineConfig) -> dict:
    out = Path(config.out)
    specs = read_jsonl(out / "specs.jsonl")
    seeds = read_seed_specs(config.seeds[0]) if config.seeds else []

    candidates = []
    for project, files in load_corpus(config.resolved_test_corpus()):
        try:
            for extraction in parse_project(project, files):
                candidates.extend(sink_candidates(extraction))
        except Exception as err:
            raise PipelineStageError("predict", project, err)

    predictions = get_sinks(specs, seeds, candidates, min_score=config.min_score)
    write_jsonl(out / "predictions.jsonl", prediction_rows(predictions))
    return {"candidates": len(candidates), "predictions": len(predictions)}


def known_sink_rows(config: PipelineConfig) -> list[tuple[str, str, str]]:
    """(rep, stmt, func) of train-corpus elements matching any pooled snk seed.

    Every --seeds file contributes here (cross-query pooling) even though
    only the first acts as the active query's known-spec set.
    """
    out = Path(config.out)
    pooled: set[str] = set()
    for path in config.seeds:
        pooled.update(s["rep"] for s in read_seed_specs(path) if s["kind"] == "snk")
    rows = []
    for r in read_jsonl(out / "elements.jsonl"):
        if r["kind"] == "CallArgument" and r["rep"] in pooled:
            rows.append((r["rep"], r["stmt"], r["func"]))
    return rows


def run_refine(config: PipelineConfig) -> dict:
    out = Path(config.out)
    predictions = load_predictions(out / "predictions.jsonl")
    embedder = make_embedder(config)
    try:
        e_k = precompute_known(known_sink_rows(config), embedder)
        refined, e_p = refine(predictions, e_k, embedder)
    except Exception as err:
        raise PipelineStageError("refine", "-", err)
    write_jsonl(out / "refined.jsonl", prediction_rows(refined))
    write_store(store_records_for_known(e_k), out, "ek")
    write_store(store_records_for_predictions(e_p), out, "ep")
    return {"refined": len(refined), "known_sinks": sum(len(v) for v in e_k.values())}


def run_pipeline(config: PipelineConfig) -> dict:
    summary = {}
    summary["mine"] = run_mine(config)
    summary["infer"] = run_infer(config)
    summary["predict"] = run_predict(config)
    summary["refine"] = run_refine(config)
    return summary


# ------------------------------------------------- evaluation entry points

def sink_ids_matching(config: PipelineConfig, snk_reps: set[str]) -> set[str]:
    """Ids of test-corpus call arguments whose rep is in snk_reps."""
    ids = set()
    for project, files in load_corpus(config.resolved_test_corpus()):
        for extraction in parse_project(project, files):
            for el in extraction.elements:
                if el.kind == "CallArgument" and el.rep in snk_reps:
                    ids.add(el.id)
    return ids


def boosted_eval_sets(config: PipelineConfig) -> tuple[set[str], set[str], set[str]]:
    """(old, boosted, new) sink-id sets for the eval subcommand.

    old/new come from the two seed-spec versions; boosted extends old with
    the inferred specs at or above the min-score floor.
    """
    out = Path(config.out)
    old_reps = {s["rep"] for s in read_seed_specs(config.seeds_old)
                if s["kind"] == "snk"}
    new_reps = {s["rep"] for s in read_seed_specs(config.seeds_new)
                if s["kind"] == "snk"}
    predicted = {s["rep"] for s in read_jsonl(out / "specs.jsonl")
                 if s["kind"] == "snk" and s["score"] >= config.min_score}
    old_ids = sink_ids_matching(config, old_reps)
    new_ids = sink_ids_matching(config, new_reps)
    boosted_ids = old_ids | sink_ids_matching(config, old_reps | predicted)
    return old_ids, boosted_ids, new_ids
