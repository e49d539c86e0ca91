"""HTTP surface of the triage service."""

import pytest
from fastapi.testclient import TestClient

from sinkmine.predictor import PredictedSink
from sinkmine.service import create_app
from sinkmine.similarity import TokenHashEmbedder, refine
from sinkmine.triage import TriageSession


@pytest.fixture()
def client():
    preds = []
    for i in range(9):
        rep = f"relay{i % 3}(0)"
        stmt = f"relay{i % 3}(data{i % 2});"
        preds.append(PredictedSink(
            id=f"p{i}", project="proj", path="a.js", span=(i, i + 1), rep=rep,
            score=round(0.9 - 0.1 * i, 6), stmt=stmt,
            func=f"function r() {{ {stmt} }}"))
    refined, e_p = refine(preds, {}, TokenHashEmbedder())
    session = TriageSession(refined, e_p)
    return TestClient(create_app(session))


def test_list_predictions_sorted_and_filterable(client):
    rows = client.get("/api/predictions").json()
    assert len(rows) == 9
    scores = [r["score"] for r in rows]
    assert scores == sorted(scores, reverse=True)
    assert all(set(r) == {"id", "rep", "score", "stmt", "func", "banned"}
               for r in rows)
    some_rep = rows[0]["rep"]
    only = client.get("/api/predictions", params={"rep": some_rep}).json()
    assert {r["rep"] for r in only} == {some_rep}
    floor = client.get("/api/predictions", params={"min_score": 0.3}).json()
    assert all(r["score"] >= 0.3 for r in floor)


def test_ban_and_listing_interaction(client):
    first = client.get("/api/predictions").json()[0]["id"]
    out = client.post(f"/api/predictions/{first}/ban").json()
    assert out == {"dismissed": [first]}
    visible_ids = {r["id"] for r in client.get("/api/predictions").json()}
    assert first not in visible_ids
    with_banned = client.get(
        "/api/predictions", params={"include_banned": "true"}).json()
    flags = {r["id"]: r["banned"] for r in with_banned}
    assert flags[first] is True
    restored = client.post(f"/api/predictions/{first}/unban").json()
    assert restored == {"restored": [first]}
    assert first in {r["id"] for r in client.get("/api/predictions").json()}


def test_ban_similar_body_validation(client):
    rows = client.get("/api/predictions").json()
    target = rows[0]["id"]
    out = client.post(f"/api/predictions/{target}/ban-similar",
                      json={"alpha": 1.0}).json()
    assert out["dismissed"] == [target]  # nothing is strictly above 1.0
    bad = client.post(f"/api/predictions/{target}/ban-similar",
                      json={"alpha": 1.5})
    assert bad.status_code == 422
    # default alpha applies with an empty body
    ok = client.post(f"/api/predictions/{rows[1]['id']}/ban-similar", json={})
    assert ok.status_code == 200


def test_representations_and_toggle(client):
    reps = client.get("/api/representations").json()
    counts = [r["count"] for r in reps]
    assert counts == sorted(counts, reverse=True)
    rep = reps[0]["rep"]
    out = client.post("/api/representations/toggle",
                      json={"rep": rep, "hidden": True}).json()
    assert out == {"rep": rep, "hidden": True}
    assert all(r["rep"] != rep for r in client.get("/api/predictions").json())
    # hidden reps stay hidden even when banned rows are included
    assert all(r["rep"] != rep for r in client.get(
        "/api/predictions", params={"include_banned": "true"}).json())
    client.post("/api/representations/toggle", json={"rep": rep, "hidden": False})
    assert any(r["rep"] == rep for r in client.get("/api/predictions").json())


def test_stats_and_export(client):
    target = client.get("/api/predictions").json()[0]["id"]
    client.post(f"/api/predictions/{target}/ban")
    stats = client.get("/api/stats").json()
    assert stats["total"] == 9
    assert stats["banned"] == 1
    assert stats["visible"] == 8
    assert stats["steps_taken"] == 1
    export = client.get("/api/export").json()
    assert len(export["sinks"]) == 8
    assert target not in {s["id"] for s in export["sinks"]}
    assert all(spec["kind"] == "snk" for spec in export["specs"])


def test_unknown_targets_404(client):
    assert client.post("/api/predictions/ghost/ban").status_code == 404
    assert client.post("/api/predictions/ghost/ban-similar",
                       json={}).status_code == 404
    assert client.post("/api/predictions/ghost/unban").status_code == 404
    assert client.post("/api/representations/toggle",
                       json={"rep": "ghost(9)", "hidden": True}).status_code == 404
