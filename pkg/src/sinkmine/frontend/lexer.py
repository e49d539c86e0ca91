"""Tokenizer for the JavaScript subset handled by the mining frontend.

The lexer is deliberately small: ES5 tokens plus template literals, regex
literals, and the arrow. Anything outside the subset surfaces as a
JsSyntaxError that callers turn into a skipped file.
"""

from __future__ import annotations

from dataclasses import dataclass, field


KEYWORDS = {
    "async", "await", "break", "catch", "const", "continue", "delete", "do",
    "else", "false", "finally", "for", "function", "if", "in", "instanceof",
    "let", "new", "null", "of", "return", "this", "throw", "true", "try",
    "typeof", "var", "void", "while",
}

# Longest first so the scanner can match greedily.
PUNCTUATORS = [
    "===", "!==", ">>>=", "...",
    "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", "<", ">", "+", "-", "*",
    "/", "%", "&", "|", "^", "!", "~", "?", ":", "=",
]


class JsSyntaxError(ValueError):
    """Raised on input outside the supported subset."""

    def __init__(self, message: str, line: int, col: int, expected: set[str] | None = None):
        self.line = line
        self.col = col
        self.expected = expected or set()
        detail = f"{message} at line {line}, column {col}"
        if self.expected:
            detail += " (expected one of: %s)" % ", ".join(sorted(self.expected))
        super().__init__(detail)


@dataclass
class Token:
    kind: str  # "name", "keyword", "num", "str", "regex", "template", "punct", "eof"
    text: str
    start: int
    end: int
    line: int
    col: int
    # Template literals carry their structure: cooked string chunks and the
    # (start, end) spans of the ${...} expression sources, interleaved.
    parts: list[str] = field(default_factory=list)
    expr_spans: list[tuple[int, int]] = field(default_factory=list)

    def is_punct(self, text: str) -> bool:
        return self.kind == "punct" and self.text == text

    def is_keyword(self, word: str) -> bool:
        return self.kind == "keyword" and self.text == word


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    last_nl = text.rfind("\n", 0, pos)
    return line, pos - last_nl


def tokenize(text: str) -> list[Token]:
    """Scan source text into a token list ending with an eof token.

    Regex literals are recognized positionally: a "/" that cannot be a
    division operator (nothing value-like precedes it) starts a regex.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)

    def prev_allows_regex() -> bool:
        if not tokens:
            return True
        t = tokens[-1]
        if t.kind in ("num", "str", "regex", "template"):
            return False
        if t.kind == "name":
            return False
        if t.kind == "keyword":
            # `return /x/` and `typeof /x/` are regexes; `this` is a value.
            return t.text != "this"
        return not (t.is_punct(")") or t.is_punct("]") or t.is_punct("++") or t.is_punct("--"))

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                line, col = _line_col(text, i)
                raise JsSyntaxError("unterminated block comment", line, col)
            i = j + 2
            continue

        line, col = _line_col(text, i)

        if ch.isalpha() or ch in "_$":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "name"
            tokens.append(Token(kind, word, i, j, line, col))
            i = j
            continue

        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            if text.startswith("0x", i) or text.startswith("0X", i):
                j = i + 2
                while j < n and text[j] in "0123456789abcdefABCDEF":
                    j += 1
            else:
                while j < n and (text[j].isdigit() or text[j] == "."):
                    j += 1
                if j < n and text[j] in "eE":
                    j += 1
                    if j < n and text[j] in "+-":
                        j += 1
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(Token("num", text[i:j], i, j, line, col))
            i = j
            continue

        if ch in "'\"":
            j = i + 1
            while j < n and text[j] != ch:
                if text[j] == "\\":
                    j += 1
                elif text[j] == "\n":
                    break
                j += 1
            if j >= n or text[j] != ch:
                raise JsSyntaxError("unterminated string literal", line, col)
            tokens.append(Token("str", text[i : j + 1], i, j + 1, line, col))
            i = j + 1
            continue

        if ch == "`":
            tok = _scan_template(text, i, line, col)
            tokens.append(tok)
            i = tok.end
            continue

        if ch == "/" and prev_allows_regex():
            j = i + 1
            in_class = False
            while j < n:
                c = text[j]
                if c == "\\":
                    j += 2
                    continue
                if c == "\n":
                    break
                if c == "[":
                    in_class = True
                elif c == "]":
                    in_class = False
                elif c == "/" and not in_class:
                    break
                j += 1
            if j >= n or text[j] != "/":
                raise JsSyntaxError("unterminated regex literal", line, col)
            j += 1
            while j < n and text[j].isalpha():
                j += 1
            tokens.append(Token("regex", text[i:j], i, j, line, col))
            i = j
            continue

        for punct in PUNCTUATORS:
            if text.startswith(punct, i):
                tokens.append(Token("punct", punct, i, i + len(punct), line, col))
                i += len(punct)
                break
        else:
            raise JsSyntaxError(f"unexpected character {ch!r}", line, col)

    line, col = _line_col(text, n)
    tokens.append(Token("eof", "", n, n, line, col))
    return tokens


def _scan_template(text: str, start: int, line: int, col: int) -> Token:
    """Scan a backtick template, recording ${...} expression spans."""
    n = len(text)
    parts: list[str] = []
    spans: list[tuple[int, int]] = []
    chunk: list[str] = []
    i = start + 1
    while i < n:
        c = text[i]
        if c == "\\":
            chunk.append(text[i : i + 2])
            i += 2
            continue
        if c == "`":
            parts.append("".join(chunk))
            tok = Token("template", text[start : i + 1], start, i + 1, line, col)
            tok.parts = parts
            tok.expr_spans = spans
            return tok
        if c == "$" and i + 1 < n and text[i + 1] == "{":
            parts.append("".join(chunk))
            chunk = []
            depth = 1
            j = i + 2
            while j < n and depth:
                if text[j] == "{":
                    depth += 1
                elif text[j] == "}":
                    depth -= 1
                j += 1
            if depth:
                raise JsSyntaxError("unterminated template expression", line, col)
            spans.append((i + 2, j - 1))
            i = j
            continue
        chunk.append(c)
        i += 1
    raise JsSyntaxError("unterminated template literal", line, col)
