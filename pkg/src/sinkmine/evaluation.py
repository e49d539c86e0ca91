"""Evaluation harness: boosted-query precision/recall and triage-effort simulation.

Precision and recall compare the sinks gained by boosting a seed query
against the sinks a newer seed query knows about. The triage simulator
replays the reviewer workflow mechanically: cheap discards first, then a
top-down walk where every visit costs one step and false positives are
dismissed together with their similar peers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .predictor import PredictedSink
from .representations import coarseness
from .similarity import PredictionEmbeddings
from .triage import TriageSession


class UnlabeledPrediction(KeyError):
    pass


@dataclass
class EvalReport:
    precision: float | None  # None = not applicable (zero denominator)
    recall: float | None
    alerts_to_recover: int
    alerts_recovered: int
    spurious_alerts: int


def eval_boosted(old_sinks: set[str], boosted_sinks: set[str],
                 new_sinks: set[str]) -> EvalReport:
    """Score the sinks gained by boosting against the newer ground truth."""
    gained = boosted_sinks - old_sinks
    to_recover = new_sinks - old_sinks
    recovered = gained & new_sinks
    return EvalReport(
        precision=len(recovered) / len(gained) if gained else None,
        recall=len(recovered) / len(to_recover) if to_recover else None,
        alerts_to_recover=len(to_recover),
        alerts_recovered=len(recovered),
        spurious_alerts=len(gained - new_sinks))


@dataclass
class TriageEffortReport:
    discarded_by_score: int
    discarded_by_coarseness: int
    remaining_fps: int  # false positives surviving phase 1
    steps_to_triage: int
    false_negatives: int


def simulate_triage(predictions: list[PredictedSink], labels: dict[str, bool],
                    e_p: PredictionEmbeddings, score_cutoff: float = 0.5,
                    coarseness_cutoff: float = 0.2,
                    alpha: float = 0.95) -> TriageEffortReport:
    """Mechanical reviewer: discard cheap, then walk and ban-similar the FPs.

    labels maps prediction id -> True for true positives. Phase 1 drops
    predictions scored below score_cutoff, then (among the survivors)
    those whose representation covers more than coarseness_cutoff of the
    whole set; discarded true positives count as false negatives. Phase 2
    visits survivors by descending score (ties by id); each visit is one
    step; a false positive is dismissed via ban_similar(alpha) and any true
    positives swept along become false negatives; a true positive is
    accepted.
    """
    for p in predictions:
        if p.id not in labels:
            raise UnlabeledPrediction(p.id)
    if not predictions:
        return TriageEffortReport(0, 0, 0, 0, 0)

    all_reps = [p.rep for p in predictions]
    false_negatives = 0

    by_score = [p for p in predictions if p.score < score_cutoff]
    survivors = [p for p in predictions if p.score >= score_cutoff]
    by_coarse = [p for p in survivors if coarseness(p.rep, all_reps) > coarseness_cutoff]
    survivors = [p for p in survivors if coarseness(p.rep, all_reps) <= coarseness_cutoff]
    false_negatives += sum(1 for p in by_score + by_coarse if labels[p.id])

    session = TriageSession(survivors, e_p)
    steps = 0
    for p in session.predictions:
        if p.id in session.state.banned:
            continue  # swept along by an earlier ban-similar
        steps += 1
        if labels[p.id]:
            session.accept(p.id)
        else:
            swept = session.ban_similar(p.id, alpha) - {p.id}
            false_negatives += sum(1 for sid in swept if labels[sid])

    return TriageEffortReport(
        discarded_by_score=len(by_score),
        discarded_by_coarseness=len(by_coarse),
        remaining_fps=sum(1 for p in survivors if not labels[p.id]),
        steps_to_triage=steps,
        false_negatives=false_negatives)
