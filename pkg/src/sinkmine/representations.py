"""Access-path representations of program elements.

A representation names the API slot an element occupies, independent of the
project it came from. Three operators compose on a root that is either a
named global/import or the wildcard `*`:

    property access   p.q
    parameter access  p(i)      (argument or parameter i of p)
    result access     p()

The compact dotted syntax elides a wildcard root in front of a named
property, so `*.find(0)` is written `find(0)`. A Lisp-like form such as
`(member $regex (member username (parameter 0 (member find *))))` is also
accepted on input and normalized to the dotted syntax.
"""

from __future__ import annotations

from dataclasses import dataclass

from .frontend.elements import (
    CALL_ARGUMENT, CALL_RESULT, PARAMETER, PROPERTY_READ, PROPERTY_WRITE,
    ExtractionResult, ProgramElement,
)
from .frontend.jsast import (
    ArrowFunction, Assign, Await, Call, FunctionDecl, Identifier, Member,
    Node, Program, Property, Try, VarDecl, VarDeclarator,
)

PROP = "prop"
PARAM = "param"
RESULT = "result"

_MAX_PATHS = 16
_MAX_BASES = 8
_MAX_DEPTH = 4


class EmptyPredictionSet(ValueError):
    """Raised when coarseness is asked about an empty prediction set."""


@dataclass(frozen=True)
class AccessPath:
    root: str
    ops: tuple[tuple, ...] = ()

    @staticmethod
    def make(root: str, ops: tuple[tuple, ...]) -> "AccessPath":
        # Normalization: a wildcard root directly followed by a named
        # property folds into a named root, matching the dotted syntax.
        if root == "*" and ops and ops[0][0] == PROP and ops[0][1] != "*":
            return AccessPath(ops[0][1], tuple(ops[1:]))
        return AccessPath(root, tuple(ops))

    def plus(self, op: tuple) -> "AccessPath":
        return AccessPath.make(self.root, self.ops + (op,))

    def render(self) -> str:
        parts: list[str] = []
        rest = list(self.ops)
        if self.root == "*" and rest and rest[0][0] == PROP and rest[0][1] != "*":
            parts.append(rest.pop(0)[1])
        else:
            parts.append(self.root)
        for op in rest:
            if op[0] == PROP:
                parts.append("." + op[1])
            elif op[0] == PARAM:
                parts.append(f"({op[1]})")
            else:
                parts.append("()")
        return "".join(parts)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.render()


@dataclass(frozen=True)
class ReprFeatures:
    length: int
    n_param: int
    n_result: int
    n_property: int
    n_wildcards: int
    has_named_leaf: bool


def features(path: AccessPath) -> ReprFeatures:
    n_param = sum(1 for op in path.ops if op[0] == PARAM)
    n_result = sum(1 for op in path.ops if op[0] == RESULT)
    n_property = sum(1 for op in path.ops if op[0] == PROP)
    n_wild = sum(1 for op in path.ops if op[0] == PROP and op[1] == "*")
    leaf = None
    for op in reversed(path.ops):
        if op[0] == PROP:
            leaf = op[1]
            break
    named_leaf = (leaf != "*") if leaf is not None else (path.root != "*")
    return ReprFeatures(
        length=len(path.ops), n_param=n_param, n_result=n_result,
        n_property=n_property, n_wildcards=n_wild, has_named_leaf=named_leaf,
    )


def feature_score(path: AccessPath) -> float:
    """Generality-favoring score used to pick the canonical path.

    Rewards a concrete API name, penalizes wildcard segments and chain
    length. Ties are broken lexicographically by the rendered string.
    """
    f = features(path)
    return (3.0 * (1 if f.has_named_leaf else 0)
            - 2.0 * min(f.length, 3)
            - 2.0 * f.n_wildcards
            - max(0, f.length - 3))


def canonicalize(paths: list) -> AccessPath:
    """Pick the canonical representation from a non-empty path list."""
    if not paths:
        raise ValueError("cannot canonicalize an empty path list")
    parsed = [p if isinstance(p, AccessPath) else parse_path(p) for p in paths]
    best = None
    best_key: tuple | None = None
    for p in parsed:
        key = (-feature_score(p), p.render())
        if best_key is None or key < best_key:
            best, best_key = p, key
    return best


# Textual forms -----------------------------------------------------------


def parse_path(text: str) -> AccessPath:
    """Parse the dotted syntax, or the Lisp-like form when it leads with '('."""
    text = text.strip()
    if text.startswith("("):
        return _parse_sexpr(text)
    i = 0
    n = len(text)

    def read_name(pos: int) -> tuple[str, int]:
        if pos < n and text[pos] == "*":
            return "*", pos + 1
        j = pos
        while j < n and text[j] not in ".()":
            j += 1
        if j == pos:
            raise ValueError(f"bad access path: {text!r}")
        return text[pos:j], j

    root, i = read_name(0)
    ops: list[tuple] = []
    while i < n:
        ch = text[i]
        if ch == ".":
            name, i = read_name(i + 1)
            ops.append((PROP, name))
        elif ch == "(":
            j = text.find(")", i)
            if j < 0:
                raise ValueError(f"bad access path: {text!r}")
            inner = text[i + 1:j]
            ops.append((RESULT,) if inner == "" else (PARAM, int(inner)))
            i = j + 1
        else:
            raise ValueError(f"bad access path: {text!r}")
    return AccessPath.make(root, tuple(ops))


def _parse_sexpr(text: str) -> AccessPath:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse_term() -> AccessPath:
        nonlocal pos
        tok = tokens[pos]
        if tok != "(":
            pos += 1
            return AccessPath.make(tok, ())
        pos += 1  # "("
        head = tokens[pos]
        pos += 1
        if head == "member":
            name = tokens[pos]
            pos += 1
            base = parse_term()
            out = base.plus((PROP, name))
        elif head == "parameter":
            idx = int(tokens[pos])
            pos += 1
            base = parse_term()
            out = base.plus((PARAM, idx))
        elif head == "result":
            base = parse_term()
            out = base.plus((RESULT,))
        else:
            raise ValueError(f"bad access path form: {head!r}")
        if tokens[pos] != ")":
            raise ValueError(f"bad access path: {text!r}")
        pos += 1
        return out

    out = parse_term()
    if pos != len(tokens):
        raise ValueError(f"bad access path: {text!r}")
    return out


# Coarseness ---------------------------------------------------------------


def coarseness(rep: str, prediction_reps: list[str]) -> float:
    """Fraction of the prediction set carrying this representation."""
    if not prediction_reps:
        raise EmptyPredictionSet("coarseness needs a non-empty prediction set")
    return sum(1 for r in prediction_reps if r == rep) / len(prediction_reps)


# Path computation over an extraction --------------------------------------


class _Scope:
    def __init__(self, parent: "_Scope | None", func: Node | None):
        self.parent = parent
        self.func = func
        self.bindings: dict[str, tuple] = {}
        self.arg_uses: dict[str, list[tuple[Call, int]]] = {}

    def lookup(self, name: str) -> tuple | None:
        scope: _Scope | None = self
        while scope is not None:
            if name in scope.bindings:
                return scope.bindings[name]
            scope = scope.parent
        return None

    def lookup_arg_uses(self, name: str) -> list[tuple[Call, int]]:
        scope: _Scope | None = self
        while scope is not None:
            if name in scope.bindings or name in scope.arg_uses:
                return scope.arg_uses.get(name, [])
            scope = scope.parent
        return []


class PathContext:
    """Scope and parent maps over one parsed file, used to enumerate paths."""

    def __init__(self, program: Program):
        self.parent_of: dict[int, Node] = {}
        self.scope_of: dict[int, _Scope] = {}
        root = _Scope(None, None)
        self._hoist(program.body, root)
        self._walk(program, root)

    def _hoist(self, body: list[Node], scope: _Scope) -> None:
        """Collect function-scoped declarations and argument uses."""
        stack = list(body)
        while stack:
            node = stack.pop()
            if isinstance(node, (FunctionDecl, ArrowFunction)):
                if isinstance(node, FunctionDecl) and node.name:
                    scope.bindings.setdefault(node.name, ("func", node))
                continue  # do not descend into nested functions
            if isinstance(node, VarDecl):
                for d in node.decls:
                    scope.bindings.setdefault(d.name, ("var", d.init))
                    if isinstance(d.init, (FunctionDecl, ArrowFunction)):
                        scope.bindings[d.name] = ("func", d.init)
            if isinstance(node, Call):
                for i, arg in enumerate(node.args):
                    if isinstance(arg, Identifier):
                        scope.arg_uses.setdefault(arg.name, []).append((node, i))
            if isinstance(node, Try) and node.catch_param:
                scope.bindings.setdefault(node.catch_param, ("var", None))
            stack.extend(node.children())

    def _walk(self, node: Node, scope: _Scope) -> None:
        self.scope_of[id(node)] = scope
        child_scope = scope
        if isinstance(node, (FunctionDecl, ArrowFunction)):
            child_scope = _Scope(scope, node)
            for i, p in enumerate(node.params):
                child_scope.bindings[p.name] = ("param", node, i)
            if isinstance(node, FunctionDecl) and node.name:
                child_scope.bindings.setdefault(node.name, ("func", node))
            body = node.body
            if isinstance(body, Node):
                bodies = body.children() if body.kind == "Block" else [body]
                self._hoist(list(bodies), child_scope)
        for child in node.children():
            self.parent_of[id(child)] = node
            self._walk(child, child_scope)

    # Expression value paths --------------------------------------------

    def expr_paths(self, node: Node, depth: int = _MAX_DEPTH,
                   active: frozenset = frozenset()) -> list[AccessPath]:
        if depth <= 0:
            return [AccessPath.make("*", ())]
        if isinstance(node, Identifier):
            return self._identifier_paths(node, depth, active)
        if isinstance(node, Member):
            name = node.prop if node.computed is None else "*"
            bases = self.expr_paths(node.obj, depth, active)
            return [b.plus((PROP, name)) for b in bases][:_MAX_BASES]
        if isinstance(node, Call):
            bases = self.callee_paths(node.callee, depth, active)
            return [b.plus((RESULT,)) for b in bases][:_MAX_BASES]
        if isinstance(node, Await):
            return self.expr_paths(node.operand, depth, active)
        return [AccessPath.make("*", ())]

    def _identifier_paths(self, node: Identifier, depth: int,
                          active: frozenset) -> list[AccessPath]:
        scope = self.scope_of.get(id(node))
        binding = scope.lookup(node.name) if scope else None
        if binding is None:
            return [AccessPath.make(node.name, ())]
        if binding[0] == "func":
            return [AccessPath.make(node.name, ())]
        if binding[0] == "param":
            _, func, idx = binding
            bases = self.function_paths(func, depth - 1, active)
            return [b.plus((PARAM, idx)) for b in bases][:_MAX_BASES]
        out: list[AccessPath] = []
        init = binding[1]
        if init is not None and id(init) not in active:
            out.extend(self.expr_paths(init, depth - 1, active | {id(init)}))
        if scope is not None:
            for call, idx in scope.lookup_arg_uses(node.name)[:2]:
                for b in self.callee_paths(call.callee, depth - 1, active):
                    out.append(b.plus((PARAM, idx)))
        if not out:
            out.append(AccessPath.make("*", ()))
        return out[:_MAX_BASES]

    def callee_paths(self, callee: Node, depth: int = _MAX_DEPTH,
                     active: frozenset = frozenset()) -> list[AccessPath]:
        if isinstance(callee, Identifier):
            scope = self.scope_of.get(id(callee))
            binding = scope.lookup(callee.name) if scope else None
            if binding is None or binding[0] == "func":
                return [AccessPath.make(callee.name, ())]
        return self.expr_paths(callee, depth, active)

    def function_paths(self, func: Node, depth: int,
                       active: frozenset = frozenset()) -> list[AccessPath]:
        """Paths naming a function value: its declaration or the slot it fills."""
        if isinstance(func, FunctionDecl) and func.name:
            return [AccessPath.make(func.name, ())]
        return self.context_paths(func, depth, active)

    def context_paths(self, node: Node, depth: int,
                      active: frozenset = frozenset()) -> list[AccessPath]:
        """Paths of the syntactic slot a value expression occupies."""
        if depth <= 0:
            return [AccessPath.make("*", ())]
        parent = self.parent_of.get(id(node))
        if isinstance(parent, Call) and node in parent.args:
            idx = parent.args.index(node)
            bases = self.callee_paths(parent.callee, depth - 1, active)
            return [b.plus((PARAM, idx)) for b in bases][:_MAX_BASES]
        if isinstance(parent, Assign) and parent.value is node:
            target = parent.target
            if isinstance(target, Member):
                return self.expr_paths(target, depth - 1, active)
            if isinstance(target, Identifier):
                return [AccessPath.make(target.name, ())]
        if isinstance(parent, VarDeclarator) and parent.init is node:
            return [AccessPath.make(parent.name, ())]
        if isinstance(parent, Property) and parent.value is node:
            lit = self.parent_of.get(id(parent))
            bases = self.context_paths(lit, depth - 1, active) if lit else []
            return [b.plus((PROP, parent.key)) for b in bases][:_MAX_BASES]
        if isinstance(parent, Await):
            return self.context_paths(parent, depth, active)
        return [AccessPath.make("*", ())]


def _generalize(bases: list[AccessPath], op: tuple) -> list[AccessPath]:
    """Full forms, method-name wildcards, then suffix elisions; deduped."""
    cands: list[AccessPath] = []
    for b in bases:
        cands.append(b.plus(op))
    for b in bases:
        named = [i for i, o in enumerate(b.ops) if o[0] == PROP and o[1] != "*"]
        if named:
            i = named[-1]
            ops = b.ops[:i] + ((PROP, "*"),) + b.ops[i + 1:]
            cands.append(AccessPath.make(b.root, ops).plus(op))
    for b in bases:
        start = 0 if b.root != "*" else 1
        for j in range(start, len(b.ops) + 1):
            cands.append(AccessPath.make("*", b.ops[j:]).plus(op))

    out: list[AccessPath] = []
    seen: set[str] = set()
    for p in cands:
        if not p.ops:
            continue  # a bare name is not a usable path
        r = p.render()
        if r not in seen:
            seen.add(r)
            out.append(p)
    if not out:
        fallback = bases[0].plus(op) if bases else AccessPath.make("*", (op,))
        out = [fallback]

    def specificity(p: AccessPath) -> tuple:
        named = (1 if p.root != "*" else 0) + sum(
            1 for o in p.ops if o[0] == PROP and o[1] != "*")
        return (-named, -len(p.ops), p.render())

    out.sort(key=specificity)
    return out[:_MAX_PATHS]


def compute_access_paths(extraction: ExtractionResult, element: ProgramElement,
                         ctx: PathContext | None = None) -> list[AccessPath]:
    """Enumerate an element's access paths, most specific first."""
    if ctx is None:
        ctx = PathContext(extraction.program)
    node = extraction.node_of[element.id]
    if element.kind == CALL_RESULT:
        assert isinstance(node, Call)
        return _generalize(ctx.callee_paths(node.callee), (RESULT,))
    if element.kind == CALL_ARGUMENT:
        call = ctx.parent_of[id(node)]
        assert isinstance(call, Call)
        return _generalize(ctx.callee_paths(call.callee), (PARAM, element.index))
    if element.kind == PARAMETER:
        func = ctx.parent_of[id(node)]
        return _generalize(ctx.function_paths(func, _MAX_DEPTH), (PARAM, element.index))
    if isinstance(node, Member):
        name = node.prop if node.computed is None else "*"
        return _generalize(ctx.expr_paths(node.obj), (PROP, name))
    if isinstance(node, Property):
        lit = ctx.parent_of.get(id(node))
        bases = ctx.context_paths(lit, _MAX_DEPTH) if lit is not None else []
        return _generalize(bases, (PROP, node.key))
    raise ValueError(f"unsupported element kind {element.kind!r}")


def annotate(extraction: ExtractionResult) -> None:
    """Fill in the canonical representation of every extracted element."""
    ctx = PathContext(extraction.program)
    for el in extraction.elements:
        paths = compute_access_paths(extraction, el, ctx)
        el.rep = canonicalize(paths).render()
