"""Instantiate inferred sink specifications on concrete test-corpus elements.

A prediction pairs an element with the averaged score of its canonical
representation. Representations already modeled as sinks in the seed
specs are excluded: the point is to surface sinks nobody wrote down yet.
"""

from __future__ import annotations

from dataclasses import dataclass

from .frontend.elements import ExtractionResult, ProgramElement


@dataclass
class PredictedSink:
    id: str
    project: str
    path: str
    span: tuple[int, int]
    rep: str
    score: float
    stmt: str
    func: str


def get_sinks(predicted_specs: list[dict], seed_specs: list[dict],
              test_elements: list[tuple[ProgramElement, str, str]],
              min_score: float = 0.0) -> list[PredictedSink]:
    """Concrete predictions for every element whose rep is a predicted sink.

    test_elements are (element, stmt_text, func_text) for the sink-candidate
    elements of the test corpus. min_score floors the emitted set; 0 keeps
    everything. Output sorted by score descending, ties by element id.
    """
    known_snk = {s["rep"] for s in seed_specs if s["kind"] == "snk"}
    score_of = {s["rep"]: s["score"] for s in predicted_specs
                if s["kind"] == "snk" and s["rep"] not in known_snk}

    out: list[PredictedSink] = []
    for element, stmt, func in test_elements:
        score = score_of.get(element.rep)
        if score is None or score < min_score:
            continue
        out.append(PredictedSink(
            id=element.id, project=element.project, path=element.path,
            span=element.span, rep=element.rep, score=score,
            stmt=stmt, func=func))
    out.sort(key=lambda p: (-p.score, p.id))
    return out


def sink_candidates(extraction: ExtractionResult) -> list[tuple[ProgramElement, str, str]]:
    """The (element, stmt, func) rows get_sinks consumes: call arguments only."""
    rows = []
    for element in extraction.elements:
        if element.kind == "CallArgument":
            stmt, func = extraction.enclosing_code(element.id)
            rows.append((element, stmt, func))
    return rows
