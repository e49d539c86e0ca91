"""AST node classes for the JavaScript subset.

Every node carries a (start, end) codepoint span into the source file.
Child spans nest inside their parent's span and siblings do not overlap;
the parser is responsible for both invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields


@dataclass
class Node:
    start: int
    end: int

    KIND = "Node"

    @property
    def kind(self) -> str:
        return self.KIND

    def children(self) -> list["Node"]:
        out: list[Node] = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Node):
                out.append(v)
            elif isinstance(v, list):
                out.extend(x for x in v if isinstance(x, Node))
        return out

    def walk(self):
        """Yield this node and all descendants, preorder."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children()))


@dataclass
class Program(Node):
    body: list[Node] = field(default_factory=list)
    KIND = "Program"


@dataclass
class Identifier(Node):
    name: str = ""
    KIND = "Identifier"


@dataclass
class StringLit(Node):
    value: str = ""
    KIND = "StringLit"


@dataclass
class NumberLit(Node):
    value: str = ""
    KIND = "NumberLit"


@dataclass
class RegexLit(Node):
    value: str = ""
    KIND = "RegexLit"


@dataclass
class BoolLit(Node):
    value: bool = False
    KIND = "BoolLit"


@dataclass
class NullLit(Node):
    KIND = "NullLit"


@dataclass
class ThisExpr(Node):
    KIND = "This"


@dataclass
class TemplateLit(Node):
    quasis: list[str] = field(default_factory=list)
    exprs: list[Node] = field(default_factory=list)
    KIND = "TemplateLit"


@dataclass
class ArrayLit(Node):
    items: list[Node] = field(default_factory=list)
    KIND = "ArrayLit"


@dataclass
class Property(Node):
    key: str = ""
    value: Node | None = None
    computed_key: Node | None = None  # set when the key is [expr]
    KIND = "Property"


@dataclass
class ObjectLit(Node):
    props: list[Property] = field(default_factory=list)
    KIND = "ObjectLit"


@dataclass
class Member(Node):
    obj: Node | None = None
    prop: str = ""  # "" when computed
    computed: Node | None = None
    KIND = "Member"


@dataclass
class Call(Node):
    callee: Node | None = None
    args: list[Node] = field(default_factory=list)
    is_new: bool = False
    KIND = "Call"


@dataclass
class Unary(Node):
    op: str = ""
    operand: Node | None = None
    KIND = "Unary"


@dataclass
class Update(Node):
    op: str = ""
    operand: Node | None = None
    prefix: bool = True
    KIND = "Update"


@dataclass
class Await(Node):
    operand: Node | None = None
    KIND = "Await"


@dataclass
class Binary(Node):
    op: str = ""
    left: Node | None = None
    right: Node | None = None
    KIND = "Binary"


@dataclass
class Logical(Node):
    op: str = ""
    left: Node | None = None
    right: Node | None = None
    KIND = "Logical"


@dataclass
class Conditional(Node):
    test: Node | None = None
    consequent: Node | None = None
    alternate: Node | None = None
    KIND = "Conditional"


@dataclass
class Assign(Node):
    op: str = "="
    target: Node | None = None
    value: Node | None = None
    KIND = "Assign"


@dataclass
class FunctionDecl(Node):
    name: str = ""
    params: list[Identifier] = field(default_factory=list)
    body: Node | None = None
    is_async: bool = False
    is_expression: bool = False  # function expressions reuse this node
    KIND = "FunctionDecl"


@dataclass
class ArrowFunction(Node):
    params: list[Identifier] = field(default_factory=list)
    body: Node | None = None  # Block or a bare expression
    is_async: bool = False
    KIND = "ArrowFunction"


@dataclass
class VarDeclarator(Node):
    name: str = ""
    init: Node | None = None
    KIND = "VarDeclarator"


@dataclass
class VarDecl(Node):
    decl_kind: str = "var"  # var | let | const
    decls: list[VarDeclarator] = field(default_factory=list)
    KIND = "VarDecl"


@dataclass
class Block(Node):
    body: list[Node] = field(default_factory=list)
    KIND = "Block"


@dataclass
class ExprStmt(Node):
    expr: Node | None = None
    KIND = "ExprStmt"


@dataclass
class Return(Node):
    argument: Node | None = None
    KIND = "Return"


@dataclass
class If(Node):
    test: Node | None = None
    then: Node | None = None
    orelse: Node | None = None
    KIND = "If"


@dataclass
class While(Node):
    test: Node | None = None
    body: Node | None = None
    KIND = "While"


@dataclass
class DoWhile(Node):
    body: Node | None = None
    test: Node | None = None
    KIND = "DoWhile"


@dataclass
class For(Node):
    init: Node | None = None
    test: Node | None = None
    update: Node | None = None
    body: Node | None = None
    KIND = "For"


@dataclass
class ForIn(Node):
    left: Node | None = None
    right: Node | None = None
    body: Node | None = None
    is_of: bool = False
    KIND = "ForIn"


@dataclass
class Try(Node):
    block: Node | None = None
    catch_param: str | None = None
    handler: Node | None = None
    finalizer: Node | None = None
    KIND = "Try"


@dataclass
class Throw(Node):
    argument: Node | None = None
    KIND = "Throw"


@dataclass
class Break(Node):
    KIND = "Break"


@dataclass
class Continue(Node):
    KIND = "Continue"


@dataclass
class Empty(Node):
    KIND = "Empty"


STATEMENT_KINDS = {
    "VarDecl", "ExprStmt", "Return", "If", "While", "DoWhile", "For", "ForIn",
    "Try", "Throw", "Break", "Continue", "Empty", "Block", "FunctionDecl",
}

FUNCTION_KINDS = {"FunctionDecl", "ArrowFunction"}
