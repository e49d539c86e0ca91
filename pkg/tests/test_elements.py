"""Program-element extraction: spans, ids, enclosing code."""

from sinkmine.frontend import parse_source
from sinkmine.frontend.elements import element_id


SRC = """const db = require('datastore');

function save(req, res) {
  const raw = req.body;
  db.putRecord({ payload: raw }, 'fast');
}

const ping = () => heartbeat(1);
"""


def by_kind(extraction, kind):
    return [el for el in extraction.elements if el.kind == kind]


def test_extraction_completeness_counts():
    x = parse_source("p", "a.js", SRC)
    calls = by_kind(x, "CallResult")
    args = by_kind(x, "CallArgument")
    # require, putRecord, heartbeat
    assert len(calls) == 3
    # 'datastore', object literal, 'fast', 1
    assert len(args) == 4


def test_parameter_elements():
    x = parse_source("p", "a.js", SRC)
    params = by_kind(x, "Parameter")
    assert [p.index for p in params] == [0, 1]


def test_property_read_and_write():
    x = parse_source("p", "a.js", SRC)
    reads = by_kind(x, "PropertyRead")
    writes = by_kind(x, "PropertyWrite")
    read_texts = {SRC[e.start:e.end] for e in reads}
    assert "req.body" in read_texts
    assert "db.putRecord" in read_texts  # method callee counts as a read
    # a write site spans the whole key: value pair
    assert any(SRC[e.start:e.end] == "payload: raw" for e in writes)


def test_spans_slice_complete_expressions():
    x = parse_source("p", "a.js", SRC)
    for el in by_kind(x, "CallResult"):
        text = SRC[el.start:el.end]
        assert text.endswith(")")


def test_element_ids_are_stable_and_distinct():
    x1 = parse_source("p", "a.js", SRC)
    x2 = parse_source("p", "a.js", SRC)
    ids1 = [el.id for el in x1.elements]
    ids2 = [el.id for el in x2.elements]
    assert ids1 == ids2
    assert len(set(ids1)) == len(ids1)


def test_id_scheme_matches_fields():
    x = parse_source("proj", "dir/f.js", SRC)
    el = x.elements[0]
    assert el.id == element_id("proj", "dir/f.js", el.start, el.end, el.kind)


def test_project_distinguishes_ids():
    a = parse_source("p1", "a.js", SRC).elements[0]
    b = parse_source("p2", "a.js", SRC).elements[0]
    assert a.id != b.id


def test_enclosing_statement_text():
    x = parse_source("p", "a.js", SRC)
    arg = next(el for el in by_kind(x, "CallArgument")
               if SRC[el.start:el.end].startswith("{ payload"))
    stmt, func = x.enclosing_code(arg.id)
    assert stmt == "db.putRecord({ payload: raw }, 'fast');"
    assert func.startswith("function save")


def test_enclosing_function_for_arrow():
    x = parse_source("p", "a.js", SRC)
    arg = next(el for el in by_kind(x, "CallArgument")
               if SRC[el.start:el.end] == "1")
    stmt, func = x.enclosing_code(arg.id)
    assert func == "() => heartbeat(1)"


def test_top_level_element_function_is_whole_file():
    x = parse_source("p", "a.js", SRC)
    arg = next(el for el in by_kind(x, "CallArgument")
               if SRC[el.start:el.end] == "'datastore'")
    stmt, func = x.enclosing_code(arg.id)
    assert stmt == "const db = require('datastore');"
    assert func == SRC
