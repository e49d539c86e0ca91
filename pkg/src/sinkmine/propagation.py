"""Per-project propagation graphs and flow-triple mining.

The graph is an optimistic, intraprocedural dataflow over program elements.
No points-to analysis: every unknown call propagates its arguments (and the
receiver of a method call) to its result, and objects are tainted wholesale
as soon as one of their properties is. Callees declared in the same file
additionally connect arguments to parameters and returned expressions to
the call result.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .frontend.elements import (
    CALL_ARGUMENT, CALL_RESULT, PARAMETER, PROPERTY_READ, PROPERTY_WRITE,
    ExtractionResult, ProgramElement,
)
from .frontend.jsast import (
    ArrayLit, ArrowFunction, Assign, Await, Binary, Call, Conditional,
    ForIn, FunctionDecl, Identifier, Logical, Member, Node, ObjectLit,
    Program, Property, Return, TemplateLit, Try, Unary, Update, VarDecl,
    VarDeclarator, FUNCTION_KINDS,
)

MAX_PATH_LENGTH = 64
TRIPLE_CAP = 1_000_000

SRC_KINDS = {CALL_RESULT, PARAMETER, PROPERTY_READ}
SAN_KINDS = {CALL_RESULT}
SNK_KINDS = {CALL_ARGUMENT}


class TripleExplosion(RuntimeError):
    """Raised when a project would yield more than TRIPLE_CAP triples."""


@dataclass(frozen=True)
class FlowTriple:
    src: str
    san: str
    snk: str


@dataclass(frozen=True)
class KnownLabel:
    element_id: str
    kind: str  # src | san | snk
    rep: str


@dataclass
class PropagationGraph:
    project: str
    nodes: set[str] = field(default_factory=set)
    edges: set[tuple[str, str]] = field(default_factory=set)

    def successors(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in sorted(self.edges):
            adj.setdefault(a, []).append(b)
        return adj


def candidate_roles(element: ProgramElement) -> set[str]:
    """Syntactic roles an element may play in a flow triple."""
    roles: set[str] = set()
    if element.kind in SRC_KINDS:
        roles.add("src")
    if element.kind in SAN_KINDS:
        roles.add("san")
    if element.kind in SNK_KINDS:
        roles.add("snk")
    return roles


def build_graph(project: str, extractions: list[ExtractionResult]) -> PropagationGraph:
    graph = PropagationGraph(project=project)
    for x in extractions:
        graph.nodes.update(el.id for el in x.elements)
        _FileFlow(x).run(graph.edges)
    return graph


class _Scope:
    def __init__(self, parent: "_Scope | None", func: Node | None):
        self.parent = parent
        self.func = func
        self.names: set[str] = set()

    def declare(self, name: str) -> None:
        self.names.add(name)

    def resolve(self, name: str) -> "tuple[_Scope, str] | None":
        scope: _Scope | None = self
        while scope is not None:
            if name in scope.names:
                return (scope, name)
            scope = scope.parent
        return None


class _FileFlow:
    """Flow-insensitive evaluator producing propagation edges for one file.

    Variable and return value-sets grow monotonically over repeated passes,
    so iterating to a fixpoint terminates; the pass cap is a safety valve.
    """

    def __init__(self, x: ExtractionResult):
        self.x = x
        self.values: dict[tuple[int, str], set[str]] = {}
        self.returns: dict[int, set[str]] = {}
        self.functions: dict[tuple[int, str], Node] = {}
        self.edges: set[tuple[str, str]] = set()
        self.scope_of: dict[int, _Scope] = {}
        self.root = _Scope(None, None)
        self._prepare(self.x.program, self.root)

    def run(self, out_edges: set[tuple[str, str]]) -> None:
        for _ in range(16):
            before = (sum(len(v) for v in self.values.values()),
                      sum(len(v) for v in self.returns.values()),
                      len(self.edges))
            self._pass(self.x.program)
            after = (sum(len(v) for v in self.values.values()),
                     sum(len(v) for v in self.returns.values()),
                     len(self.edges))
            if after == before:
                break
        out_edges.update((a, b) for a, b in self.edges if a != b)

    # Scope construction --------------------------------------------------

    def _prepare(self, node: Node, scope: _Scope) -> None:
        self.scope_of[id(node)] = scope
        child_scope = scope
        if node.kind in FUNCTION_KINDS:
            child_scope = _Scope(scope, node)
            for p in node.params:  # type: ignore[attr-defined]
                child_scope.declare(p.name)
            if isinstance(node, FunctionDecl) and node.name:
                scope.declare(node.name)
                self.functions[(id(scope), node.name)] = node
        if isinstance(node, VarDecl):
            for d in node.decls:
                scope.declare(d.name)
                if isinstance(d.init, (FunctionDecl, ArrowFunction)):
                    self.functions[(id(scope), d.name)] = d.init
        if isinstance(node, Try) and node.catch_param:
            scope.declare(node.catch_param)
        for child in node.children():
            self._prepare(child, child_scope)

    def _lookup_function(self, node: Identifier) -> Node | None:
        scope = self.scope_of.get(id(node))
        while scope is not None:
            fn = self.functions.get((id(scope), node.name))
            if fn is not None:
                return fn
            if node.name in scope.names:
                return None  # shadowed by a non-function binding
            scope = scope.parent
        return None

    def _var_slot(self, node: Identifier) -> tuple[int, str] | None:
        scope = self.scope_of.get(id(node))
        if scope is None:
            return None
        hit = scope.resolve(node.name)
        if hit is None:
            return None
        return (id(hit[0]), hit[1])

    # Evaluation -----------------------------------------------------------

    def _pass(self, node: Node) -> None:
        if isinstance(node, Return):
            vset = self.eval(node.argument) if node.argument else set()
            func = self._enclosing_function(node)
            if func is not None:
                self.returns.setdefault(id(func), set()).update(vset)
            return
        if isinstance(node, VarDecl):
            for d in node.decls:
                if d.init is not None:
                    self._bind(d, d.name, self.eval(d.init))
            return
        if isinstance(node, ForIn):
            rset = self.eval(node.right)
            left = node.left
            if isinstance(left, VarDecl) and left.decls:
                self._bind(left.decls[0], left.decls[0].name, rset)
            elif isinstance(left, Identifier):
                self._bind(left, left.name, rset)
            self._pass(node.body)
            return
        if isinstance(node, (ArrowFunction, FunctionDecl)):
            body = node.body
            if isinstance(body, Node):
                if body.kind == "Block":
                    self._pass(body)
                else:
                    # expression-bodied arrow: the expression is the return
                    self.returns.setdefault(id(node), set()).update(self.eval(body))
            return
        if node.kind in ("ExprStmt", "Throw"):
            self.eval(node.children()[0] if node.children() else None)
            return
        if isinstance(node, (Program,)) or node.kind in (
                "Block", "If", "While", "DoWhile", "For", "Try"):
            for child in node.children():
                if child.kind in FUNCTION_KINDS:
                    self._pass(child)
                elif isinstance(child, Node) and child.kind in (
                        "Block", "If", "While", "DoWhile", "For", "ForIn", "Try",
                        "ExprStmt", "Return", "VarDecl", "Throw", "Empty",
                        "Break", "Continue"):
                    self._pass(child)
                else:
                    self.eval(child)
            return
        # statements with no dataflow payload
        for child in node.children():
            self._pass(child)

    def _enclosing_function(self, node: Node) -> Node | None:
        scope = self.scope_of.get(id(node))
        while scope is not None:
            if scope.func is not None:
                return scope.func
            scope = scope.parent
        return None

    def _bind(self, at: Node, name: str, vset: set[str]) -> None:
        scope = self.scope_of.get(id(at), self.root)
        hit = scope.resolve(name)
        slot = (id(hit[0]), hit[1]) if hit else (id(self.root), name)
        self.values.setdefault(slot, set()).update(vset)

    def _add_edges(self, sources: set[str], target: str) -> None:
        for s in sources:
            if s != target:
                self.edges.add((s, target))

    def eval(self, node: Node | None) -> set[str]:
        if node is None:
            return set()
        if isinstance(node, Identifier):
            out: set[str] = set()
            scope = self.scope_of.get(id(node))
            if scope is not None:
                hit = scope.resolve(node.name)
                if hit is not None:
                    slot = (id(hit[0]), hit[1])
                    out |= self.values.get(slot, set())
                    owner = hit[0]
                    if owner.func is not None:
                        fn = owner.func
                        for i, p in enumerate(getattr(fn, "params", [])):
                            if p.name == node.name:
                                pel = self.x.parameter.get((id(fn), i))
                                if pel is not None:
                                    out.add(pel.id)
            return out
        if isinstance(node, Member):
            base = self.eval(node.obj)
            if node.computed is not None:
                self.eval(node.computed)
            el = self.x.prop_read.get(id(node)) or self.x.prop_write.get(id(node))
            if el is None:
                return base
            self._add_edges(base, el.id)
            return {el.id}
        if isinstance(node, Call):
            return self._eval_call(node)
        if isinstance(node, ObjectLit):
            out = set()
            for prop in node.props:
                vset = self.eval(prop.value) if prop.value else set()
                if prop.computed_key is not None:
                    self.eval(prop.computed_key)
                pw = self.x.prop_write.get(id(prop))
                if pw is not None:
                    self._add_edges(vset, pw.id)
                    out.add(pw.id)
                else:
                    out |= vset
            return out
        if isinstance(node, ArrayLit):
            out = set()
            for item in node.items:
                out |= self.eval(item)
            return out
        if isinstance(node, TemplateLit):
            out = set()
            for e in node.exprs:
                out |= self.eval(e)
            return out
        if isinstance(node, Assign):
            vset = self.eval(node.value)
            target = node.target
            if isinstance(target, Identifier):
                self._bind(target, target.name, vset)
                return vset
            if isinstance(target, Member):
                self.eval(target.obj)
                pw = self.x.prop_write.get(id(target))
                if pw is not None:
                    self._add_edges(vset, pw.id)
                    # whole-object rule: a tainted property taints the object
                    if isinstance(target.obj, Identifier):
                        self._bind(target.obj, target.obj.name, {pw.id})
                    return {pw.id}
                return vset
            return vset
        if isinstance(node, (Binary, Logical)):
            return self.eval(node.left) | self.eval(node.right)
        if isinstance(node, Conditional):
            self.eval(node.test)
            return self.eval(node.consequent) | self.eval(node.alternate)
        if isinstance(node, (Unary, Update)):
            return self.eval(node.operand)
        if isinstance(node, Await):
            return self.eval(node.operand)
        if node.kind in FUNCTION_KINDS:
            self._pass(node)
            return set()
        # literals and anything else carry no element flow
        for child in node.children():
            self.eval(child)
        return set()

    def _eval_call(self, node: Call) -> set[str]:
        result_el = self.x.call_result[id(node)]
        callee = node.callee
        resolved: Node | None = None
        if isinstance(callee, Identifier):
            resolved = self._lookup_function(callee)
        elif isinstance(callee, Member):
            receiver = self.eval(callee.obj)
            callee_read = self.x.prop_read.get(id(callee))
            if callee_read is not None:
                self._add_edges(receiver, callee_read.id)
            # the receiver acts as an argument of the unknown function
            self._add_edges(receiver, result_el.id)
            if callee.computed is not None:
                self.eval(callee.computed)
        else:
            self.eval(callee)
        for i, arg in enumerate(node.args):
            aset = self.eval(arg)
            arg_el = self.x.call_arg[(id(node), i)]
            self._add_edges(aset, arg_el.id)
            self.edges.add((arg_el.id, result_el.id))
            if resolved is not None:
                pel = self.x.parameter.get((id(resolved), i))
                if pel is not None:
                    self.edges.add((arg_el.id, pel.id))
        if resolved is not None:
            self._add_edges(self.returns.get(id(resolved), set()), result_el.id)
        return {result_el.id}


# Reachability and mining ----------------------------------------------------


def _bounded_reach(adj: dict[str, list[str]], start: str, cap: int) -> set[str]:
    seen = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        depth = seen[cur]
        if depth >= cap:
            continue
        for nxt in adj.get(cur, []):
            if nxt not in seen:
                seen[nxt] = depth + 1
                queue.append(nxt)
    seen.pop(start, None)
    return set(seen)


def mine_triples(graph: PropagationGraph,
                 elements: list[ProgramElement]) -> list[FlowTriple]:
    """Enumerate candidate (src, san, snk) triples along graph paths.

    A triple requires a path src -> san and a path san -> snk, each at most
    MAX_PATH_LENGTH edges, over three distinct elements. The result is
    deduplicated and sorted for determinism.
    """
    srcs = [e.id for e in elements if e.kind in SRC_KINDS]
    sans = {e.id for e in elements if e.kind in SAN_KINDS}
    snks = {e.id for e in elements if e.kind in SNK_KINDS}
    adj = graph.successors()

    san_reach: dict[str, set[str]] = {}
    triples: set[FlowTriple] = set()
    for s in srcs:
        reach_s = _bounded_reach(adj, s, MAX_PATH_LENGTH)
        for a in reach_s & sans:
            if a == s:
                continue
            if a not in san_reach:
                san_reach[a] = _bounded_reach(adj, a, MAX_PATH_LENGTH)
            for k in san_reach[a] & snks:
                if k == s or k == a:
                    continue
                triples.add(FlowTriple(src=s, san=a, snk=k))
                if len(triples) > TRIPLE_CAP:
                    raise TripleExplosion(
                        f"project {graph.project!r} exceeds {TRIPLE_CAP} triples")
    return sorted(triples, key=lambda t: (t.src, t.san, t.snk))


def label_known(elements: list[ProgramElement], seed_specs: list[dict],
                repr_fn=None) -> list[KnownLabel]:
    """Match elements against seed specs by canonical representation."""
    if repr_fn is None:
        repr_fn = lambda e: e.rep
    by_rep: dict[str, set[str]] = {}
    for spec in seed_specs:
        by_rep.setdefault(spec["rep"], set()).add(spec["kind"])
    labels: list[KnownLabel] = []
    for el in elements:
        rep = repr_fn(el)
        for kind in sorted(by_rep.get(rep, ())):
            labels.append(KnownLabel(element_id=el.id, kind=kind, rep=rep))
    return labels
