"""Program-element extraction.

Elements are the nodes later stages reason about: call arguments, call
results, function parameters, and property reads/writes. Each element gets
a stable 64-bit FNV-1a id derived from (project, path, span, kind) so that
reruns over the same corpus produce identical ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .jsast import (
    ArrowFunction, Assign, Call, FunctionDecl, Member, Node, ObjectLit,
    Program, Property, FUNCTION_KINDS, STATEMENT_KINDS,
)

CALL_ARGUMENT = "CallArgument"
CALL_RESULT = "CallResult"
PARAMETER = "Parameter"
PROPERTY_READ = "PropertyRead"
PROPERTY_WRITE = "PropertyWrite"


class UnknownElement(KeyError):
    """Raised when an element id is not present in an extraction index."""


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def element_id(project: str, path: str, start: int, end: int, kind: str) -> str:
    return format(fnv1a64(f"{project}|{path}|{start}:{end}|{kind}".encode()), "016x")


@dataclass
class SourceFile:
    project: str
    path: str
    text: str


@dataclass
class ProgramElement:
    id: str
    project: str
    path: str
    start: int
    end: int
    kind: str
    index: int | None = None  # argument/parameter position
    stmt_start: int = 0
    stmt_end: int = 0
    func_start: int = 0
    func_end: int = 0
    rep: str = ""  # canonical representation, filled by the paths pass

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class ExtractionResult:
    """Elements of one file plus the AST handles later passes need."""

    source: SourceFile
    program: Program
    elements: list[ProgramElement] = field(default_factory=list)
    by_id: dict[str, ProgramElement] = field(default_factory=dict)
    # AST-node identity -> element, keyed by role so propagation and the
    # access-path pass can find the element for a node they are visiting.
    call_result: dict[int, ProgramElement] = field(default_factory=dict)
    call_arg: dict[tuple[int, int], ProgramElement] = field(default_factory=dict)
    parameter: dict[tuple[int, int], ProgramElement] = field(default_factory=dict)
    prop_read: dict[int, ProgramElement] = field(default_factory=dict)
    prop_write: dict[int, ProgramElement] = field(default_factory=dict)
    node_of: dict[str, Node] = field(default_factory=dict)

    def enclosing_code(self, eid: str) -> tuple[str, str]:
        """Verbatim (statement, function) source slices for an element."""
        el = self.by_id.get(eid)
        if el is None:
            raise UnknownElement(eid)
        text = self.source.text
        return (text[el.stmt_start:el.stmt_end], text[el.func_start:el.func_end])


def extract(source: SourceFile, program: Program) -> ExtractionResult:
    """Walk the AST and collect every program element, preorder.

    For a program with c call expressions carrying a_i arguments each, the
    result holds exactly sum(a_i) CallArgument and c CallResult elements.
    """
    result = ExtractionResult(source=source, program=program)
    whole = (0, len(source.text))
    _Extractor(result, whole).visit(program, stmt=whole, func=whole, write_target=False)
    return result


class _Extractor:
    def __init__(self, result: ExtractionResult, whole: tuple[int, int]):
        self.result = result
        self.whole = whole

    def add(self, node_key: int, kind: str, start: int, end: int,
            index: int | None, stmt: tuple[int, int], func: tuple[int, int]) -> ProgramElement:
        r = self.result
        src = r.source
        el = ProgramElement(
            id=element_id(src.project, src.path, start, end, kind),
            project=src.project, path=src.path, start=start, end=end,
            kind=kind, index=index,
            stmt_start=stmt[0], stmt_end=stmt[1],
            func_start=func[0], func_end=func[1],
        )
        r.elements.append(el)
        r.by_id[el.id] = el
        return el

    def visit(self, node: Node, stmt: tuple[int, int], func: tuple[int, int],
              write_target: bool) -> None:
        if node.kind in STATEMENT_KINDS:
            stmt = (node.start, node.end)
        if node.kind in FUNCTION_KINDS:
            func = (node.start, node.end)
            fn = node  # type: FunctionDecl | ArrowFunction
            for i, p in enumerate(fn.params):
                el = self.add(id(p), PARAMETER, p.start, p.end, i, stmt, func)
                self.result.parameter[(id(node), i)] = el
                self.result.node_of[el.id] = p

        if isinstance(node, Call):
            el = self.add(id(node), CALL_RESULT, node.start, node.end, None, stmt, func)
            self.result.call_result[id(node)] = el
            self.result.node_of[el.id] = node
            for i, arg in enumerate(node.args):
                ael = self.add(id(arg), CALL_ARGUMENT, arg.start, arg.end, i, stmt, func)
                self.result.call_arg[(id(node), i)] = ael
                self.result.node_of[ael.id] = arg
        elif isinstance(node, Member):
            kind = PROPERTY_WRITE if write_target else PROPERTY_READ
            el = self.add(id(node), kind, node.start, node.end, None, stmt, func)
            if write_target:
                self.result.prop_write[id(node)] = el
            else:
                self.result.prop_read[id(node)] = el
            self.result.node_of[el.id] = node
        elif isinstance(node, Property) and node.computed_key is None:
            el = self.add(id(node), PROPERTY_WRITE, node.start, node.end, None, stmt, func)
            self.result.prop_write[id(node)] = el
            self.result.node_of[el.id] = node

        for child in node.children():
            child_is_write = isinstance(node, Assign) and child is node.target \
                and isinstance(child, Member)
            self.visit(child, stmt, func, write_target=child_is_write)
