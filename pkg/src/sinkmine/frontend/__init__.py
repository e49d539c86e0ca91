"""Parsing frontend: JavaScript-subset lexer, parser, and element extraction."""

from __future__ import annotations

from .lexer import JsSyntaxError, Token, tokenize
from .parser import parse
from .elements import (
    CALL_ARGUMENT, CALL_RESULT, PARAMETER, PROPERTY_READ, PROPERTY_WRITE,
    ExtractionResult, ProgramElement, SourceFile, UnknownElement,
    element_id, extract, fnv1a64,
)
from . import jsast


def parse_source(project: str, path: str, text: str) -> ExtractionResult:
    """Parse one file and extract its program elements."""
    source = SourceFile(project=project, path=path, text=text)
    program = parse(text)
    return extract(source, program)


__all__ = [
    "CALL_ARGUMENT", "CALL_RESULT", "PARAMETER", "PROPERTY_READ",
    "PROPERTY_WRITE", "ExtractionResult", "JsSyntaxError", "ProgramElement",
    "SourceFile", "Token", "UnknownElement", "element_id", "extract",
    "fnv1a64", "jsast", "parse", "parse_source", "tokenize",
]
