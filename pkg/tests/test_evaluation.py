"""Boosted-query scoring and the mechanical triage walk."""

import random

import pytest

from sinkmine.evaluation import (
    EvalReport, UnlabeledPrediction, eval_boosted, simulate_triage,
)
from sinkmine.predictor import PredictedSink
from sinkmine.similarity import TokenHashEmbedder, refine


def test_eval_boosted_counts():
    old = {"a", "b"}
    boosted = {"a", "b", "c", "d", "e"}
    new = {"a", "b", "c", "f"}
    report = eval_boosted(old, boosted, new)
    # gained {c,d,e}; to recover {c,f}; recovered {c}
    assert report.precision == pytest.approx(1 / 3)
    assert report.recall == pytest.approx(1 / 2)
    assert report.alerts_to_recover == 2
    assert report.alerts_recovered == 1
    assert report.spurious_alerts == 2


def test_eval_boosted_zero_denominators():
    r = eval_boosted({"a"}, {"a"}, {"a", "b"})
    assert r.precision is None  # nothing gained
    assert r.recall == 0.0
    r2 = eval_boosted({"a"}, {"a", "x"}, {"a"})
    assert r2.recall is None  # nothing to recover
    assert r2.precision == 0.0
    r3 = eval_boosted(set(), set(), set())
    assert r3 == EvalReport(precision=None, recall=None, alerts_to_recover=0,
                            alerts_recovered=0, spurious_alerts=0)


def test_eval_boosted_set_identities_random():
    rng = random.Random(13)
    universe = [f"s{i}" for i in range(30)]
    for _ in range(50):
        old = {s for s in universe if rng.random() < 0.3}
        boosted = old | {s for s in universe if rng.random() < 0.3}
        new = {s for s in universe if rng.random() < 0.3}
        r = eval_boosted(old, boosted, new)
        gained = boosted - old
        assert r.alerts_recovered == len(gained & new)
        assert r.spurious_alerts + r.alerts_recovered == len(gained)
        assert r.alerts_to_recover == len(new - old)
        if r.precision is not None:
            assert 0.0 <= r.precision <= 1.0
        if r.recall is not None:
            assert r.recall == (r.alerts_recovered / r.alerts_to_recover
                                if r.alerts_to_recover else None)


def _predictions():
    """Three reps; rep distribution 10/5/5 over 20 predictions."""
    preds = []
    for i in range(20):
        rep = "wide(0)" if i < 10 else ("mid(0)" if i < 15 else "rare(0)")
        stmt = f"{rep.split('(')[0]}(value{i % 2});"
        preds.append(PredictedSink(
            id=f"q{i:02d}", project="p", path="a.js", span=(i, i + 1), rep=rep,
            score=round(1.0 - i * 0.04, 6), stmt=stmt,
            func=f"function w() {{ {stmt} }}"))
    refined, e_p = refine(preds, {}, TokenHashEmbedder())
    return preds, e_p  # solver-score ordering, embeddings from refine


def test_simulate_triage_requires_labels():
    preds, e_p = _predictions()
    with pytest.raises(UnlabeledPrediction):
        simulate_triage(preds, {p.id: True for p in preds[:-1]}, e_p)


def test_simulate_triage_empty():
    report = simulate_triage([], {}, {})
    assert report.steps_to_triage == 0 and report.false_negatives == 0


def test_phase1_score_and_coarseness_discards():
    preds, e_p = _predictions()
    labels = {p.id: True for p in preds}
    # score < 0.5 drops q13..q19 (7 rows); wide(0) covers half the set and
    # passes no coarseness bar below 0.5, dropping the 10 wide rows, of
    # which q10+ were already gone by score: coarse discards count survivors
    report = simulate_triage(preds, labels, e_p, score_cutoff=0.5,
                             coarseness_cutoff=0.3)
    assert report.discarded_by_score == 7
    assert report.discarded_by_coarseness == 10  # all surviving wide(0) rows
    # every discarded row was a true positive
    assert report.false_negatives == 17
    assert report.remaining_fps == 0
    assert report.steps_to_triage == 3  # q10, q11, q12


def test_phase2_accepts_cost_one_step_each():
    preds, e_p = _predictions()
    labels = {p.id: True for p in preds}
    report = simulate_triage(preds, labels, e_p, score_cutoff=0.0,
                             coarseness_cutoff=1.0)
    assert report.steps_to_triage == 20
    assert report.false_negatives == 0
    assert report.remaining_fps == 0


def test_phase2_ban_similar_sweeps_duplicate_fps():
    preds, e_p = _predictions()
    labels = {p.id: False for p in preds}
    report = simulate_triage(preds, labels, e_p, score_cutoff=0.0,
                             coarseness_cutoff=1.0, alpha=0.95)
    # identical statements alternate value0/value1 inside each rep, so each
    # rep needs at most two visits; 3 reps -> at most 6 steps
    assert report.remaining_fps == 20
    assert report.steps_to_triage <= 6
    assert report.false_negatives == 0


def test_swept_true_positives_become_false_negatives():
    preds, e_p = _predictions()
    # first wide row is a FP, every other wide row with the same parity is a
    # twin that gets swept; some of those twins are TPs
    labels = {p.id: (p.id != "q00") for p in preds}
    report = simulate_triage(preds, labels, e_p, score_cutoff=0.0,
                             coarseness_cutoff=1.0, alpha=0.95)
    assert report.false_negatives > 0
    # accounting: every prediction is discarded, visited, or swept
    assert report.remaining_fps == 1


def test_alpha_one_sweeps_nothing():
    preds, e_p = _predictions()
    labels = {p.id: False for p in preds}
    report = simulate_triage(preds, labels, e_p, score_cutoff=0.0,
                             coarseness_cutoff=1.0, alpha=1.0)
    assert report.steps_to_triage == 20  # every FP needs its own visit
    assert report.false_negatives == 0
