"""Propagation graph construction and flow-triple mining."""

import itertools
import random

import pytest

import sinkmine.propagation as propagation
from sinkmine.frontend import parse_source
from sinkmine.frontend.elements import ProgramElement
from sinkmine.propagation import (
    FlowTriple, KnownLabel, PropagationGraph, TripleExplosion, build_graph,
    candidate_roles, label_known, mine_triples,
)

HANDLER = """function handle(req, res) {
  const raw = getInput(req);
  const clean = sanitize(raw);
  db.putRecord({ payload: clean });
  res.send('ok');
}
"""


def _element(eid, kind):
    return ProgramElement(id=eid, project="p", path="a.js", start=0, end=1, kind=kind)


def _graph(edges):
    nodes = {n for e in edges for n in e}
    return PropagationGraph(project="p", nodes=nodes, edges=set(edges))


def _mine(src_text):
    x = parse_source("p", "a.js", src_text)
    graph = build_graph("p", [x])
    triples = mine_triples(graph, x.elements)
    text_of = {e.id: src_text[e.start:e.end] for e in x.elements}
    return graph, x, [(text_of[t.src], text_of[t.san], text_of[t.snk]) for t in triples]


def test_candidate_roles():
    assert candidate_roles(_element("a", "CallResult")) == {"src", "san"}
    assert candidate_roles(_element("b", "Parameter")) == {"src"}
    assert candidate_roles(_element("c", "PropertyRead")) == {"src"}
    assert candidate_roles(_element("d", "CallArgument")) == {"snk"}
    assert candidate_roles(_element("e", "PropertyWrite")) == set()


def test_handler_mines_expected_triple():
    _, _, texts = _mine(HANDLER)
    assert ("getInput(req)", "sanitize(raw)", "{ payload: clean }") in texts
    # the sanitizer output does not reach the unrelated send call
    assert ("getInput(req)", "sanitize(raw)", "'ok'") not in texts


def test_triples_have_three_distinct_elements():
    x = parse_source("p", "a.js", HANDLER)
    graph = build_graph("p", [x])
    kind_of = {e.id: e.kind for e in x.elements}
    for t in mine_triples(graph, x.elements):
        assert len({t.src, t.san, t.snk}) == 3
        assert kind_of[t.src] in propagation.SRC_KINDS
        assert kind_of[t.san] in propagation.SAN_KINDS
        assert kind_of[t.snk] in propagation.SNK_KINDS


def test_argument_flows_to_result_and_receiver_flows_too():
    src = "const obj = make();\nconst v = transform(x);\nobj.use(v);\n"
    graph, x, _ = _mine(src)
    text_of = {e.id: src[e.start:e.end] for e in x.elements}
    edge_texts = {(text_of[a], text_of[b]) for a, b in graph.edges}
    assert ("x", "transform(x)") in edge_texts  # argument into its call result
    assert ("v", "obj.use(v)") in edge_texts
    # a tainted receiver reaches both the method read and the call result
    assert ("make()", "obj.use") in edge_texts
    assert ("make()", "obj.use(v)") in edge_texts


def test_declared_callee_links_args_to_params():
    src = """function scrub(value) { return value; }
const out = scrub(dirty);
"""
    graph, x, _ = _mine(src)
    text_of = {e.id: src[e.start:e.end] for e in x.elements}
    edge_texts = {(text_of[a], text_of[b]) for a, b in graph.edges}
    assert ("dirty", "value") in edge_texts  # call arg to parameter
    assert ("value", "value") not in edge_texts
    # returned parameter flows back out to the call result
    assert ("value", "scrub(dirty)") in edge_texts


def test_object_literal_wraps_taint():
    src = "db.putRecord({ payload: sanitize(raw) });"
    graph, x, _ = _mine(src)
    text_of = {e.id: src[e.start:e.end] for e in x.elements}
    edge_texts = {(text_of[a], text_of[b]) for a, b in graph.edges}
    assert ("sanitize(raw)", "payload: sanitize(raw)") in edge_texts
    assert ("payload: sanitize(raw)", "{ payload: sanitize(raw) }") in edge_texts


def test_label_known_matches_by_rep():
    els = [_element("a", "CallResult"), _element("b", "CallArgument")]
    els[0].rep = "getInput()"
    els[1].rep = "send(0)"
    seed = [{"rep": "getInput()", "kind": "src"}, {"rep": "other()", "kind": "san"}]
    labels = label_known(els, seed)
    assert labels == [KnownLabel(element_id="a", kind="src", rep="getInput()")]


def test_label_known_multiple_kinds_sorted():
    els = [_element("a", "CallResult")]
    els[0].rep = "dual()"
    seed = [{"rep": "dual()", "kind": "src"}, {"rep": "dual()", "kind": "san"}]
    labels = label_known(els, seed)
    assert [l.kind for l in labels] == ["san", "src"]


def test_triple_cap(monkeypatch):
    # complete bipartite reachability: many sources through one sanitizer
    edges = set()
    elements = []
    for i in range(6):
        elements.append(_element(f"s{i}", "PropertyRead"))
        edges.add((f"s{i}", "mid"))
    elements.append(_element("mid", "CallResult"))
    for i in range(6):
        elements.append(_element(f"k{i}", "CallArgument"))
        edges.add(("mid", f"k{i}"))
    graph = _graph(edges)
    assert len(mine_triples(graph, elements)) == 36
    monkeypatch.setattr(propagation, "TRIPLE_CAP", 10)
    with pytest.raises(TripleExplosion):
        mine_triples(graph, elements)


# Oracle comparison ---------------------------------------------------------


def _closure(nodes, edges):
    """Reachability by matrix iteration, independent of the BFS in the module."""
    reach = {n: {m for (a, m) in edges if a == n} for n in nodes}
    changed = True
    while changed:
        changed = False
        for n in nodes:
            extra = set()
            for m in reach[n]:
                extra |= reach.get(m, set())
            if not extra <= reach[n]:
                reach[n] |= extra
                changed = True
    return reach


def _oracle_triples(elements, edges):
    kinds = {e.id: e.kind for e in elements}
    nodes = set(kinds)
    reach = _closure(nodes, edges)
    out = set()
    for s, a, k in itertools.product(nodes, repeat=3):
        if len({s, a, k}) != 3:
            continue
        if kinds[s] not in propagation.SRC_KINDS:
            continue
        if kinds[a] not in propagation.SAN_KINDS:
            continue
        if kinds[k] not in propagation.SNK_KINDS:
            continue
        if a in reach[s] and k in reach[a]:
            out.add(FlowTriple(src=s, san=a, snk=k))
    return out


def test_mining_matches_reachability_oracle():
    rng = random.Random(77)
    kinds = ["CallResult", "Parameter", "PropertyRead", "CallArgument", "PropertyWrite"]
    for trial in range(30):
        n = rng.randrange(4, 12)
        elements = [_element(f"n{i}", rng.choice(kinds)) for i in range(n)]
        ids = [e.id for e in elements]
        edges = set()
        for _ in range(rng.randrange(0, 2 * n)):
            a, b = rng.sample(ids, 2)
            edges.add((a, b))
        graph = PropagationGraph(project="p", nodes=set(ids), edges=edges)
        mined = set(mine_triples(graph, elements))
        assert mined == _oracle_triples(elements, edges), f"trial {trial}"


def test_adding_edges_never_removes_triples():
    rng = random.Random(3)
    kinds = ["CallResult", "Parameter", "CallArgument"]
    elements = [_element(f"n{i}", rng.choice(kinds)) for i in range(8)]
    ids = [e.id for e in elements]
    edges: set = set()
    prev: set = set()
    for _ in range(20):
        a, b = rng.sample(ids, 2)
        edges.add((a, b))
        graph = PropagationGraph(project="p", nodes=set(ids), edges=set(edges))
        cur = set(mine_triples(graph, elements))
        assert prev <= cur
        prev = cur


def test_mining_is_deterministic():
    x = parse_source("p", "a.js", HANDLER)
    graph = build_graph("p", [x])
    a = mine_triples(graph, x.elements)
    b = mine_triples(graph, x.elements)
    assert a == b
    assert a == sorted(a, key=lambda t: (t.src, t.san, t.snk))
