import pytest

from sinkmine.frontend.lexer import JsSyntaxError, tokenize


def kinds(text):
    return [t.kind for t in tokenize(text) if t.kind != "eof"]


def texts(text):
    return [t.text for t in tokenize(text) if t.kind != "eof"]


def test_basic_stream():
    toks = tokenize("const x = f(1, 'a');")
    assert [t.kind for t in toks] == [
        "keyword", "name", "punct", "name", "punct", "num", "punct",
        "str", "punct", "punct", "eof"]


def test_keywords_versus_names():
    assert kinds("return returned") == ["keyword", "name"]
    assert kinds("of offer") == ["keyword", "name"]


def test_spans_cover_lexemes():
    src = "foo .bar(12)"
    for t in tokenize(src):
        if t.kind != "eof" and t.kind != "template":
            assert src[t.start:t.end] == t.text


def test_comments_are_skipped():
    assert texts("a // trailing\n b") == ["a", "b"]
    assert texts("a /* block\n comment */ b") == ["a", "b"]


def test_regex_literal_after_operator():
    # '/' after '=' must scan as a regex literal, not division
    toks = tokenize("const r = /\\s+/g;")
    assert "regex" in [t.kind for t in toks]


def test_division_after_name_is_not_regex():
    toks = tokenize("a / b / c")
    assert [t.kind for t in toks if t.kind != "eof"] == [
        "name", "punct", "name", "punct", "name"]


def test_regex_in_call_argument():
    toks = tokenize("s.replace(/x/g, '-')")
    assert sum(1 for t in toks if t.kind == "regex") == 1


def test_template_parts_and_expr_spans():
    src = "`a${b}c${d.e}`"
    tok = [t for t in tokenize(src) if t.kind == "template"][0]
    assert tok.parts == ["a", "c", ""]
    assert [src[s:e] for s, e in tok.expr_spans] == ["b", "d.e"]


def test_template_nested_braces():
    src = "`x${ {k: 1}.k }y`"
    tok = [t for t in tokenize(src) if t.kind == "template"][0]
    assert len(tok.expr_spans) == 1
    s, e = tok.expr_spans[0]
    assert src[s:e].strip() == "{k: 1}.k"


def test_unterminated_string_reports_position():
    with pytest.raises(JsSyntaxError) as err:
        tokenize("x = 'abc")
    assert err.value.line == 1
    assert err.value.col > 1


def test_unterminated_template():
    with pytest.raises(JsSyntaxError):
        tokenize("`abc ${x}")


def test_punctuator_maximal_munch():
    assert texts("a === b") == ["a", "===", "b"]
    assert texts("a == b") == ["a", "==", "b"]
    assert texts("x => x") == ["x", "=>", "x"]


def test_numbers():
    assert kinds("1 2.5 0.125") == ["num", "num", "num"]


def test_eof_token_terminates():
    toks = tokenize("")
    assert len(toks) == 1 and toks[0].kind == "eof"
