"""Recursive-descent parser for the JavaScript subset.

Supported surface: ES5 statements and expressions plus arrow functions,
template literals, async/await, object and array literals, and member
calls. Classes, generators, destructuring, and module syntax are outside
the subset and raise JsSyntaxError; `require` is just an ordinary call.

Statement terminators follow a light ASI rule: a semicolon may be omitted
before `}`, end of input, or a line break.
"""

from __future__ import annotations

from .jsast import (
    ArrayLit, ArrowFunction, Assign, Await, Binary, Block, BoolLit, Break,
    Call, Conditional, Continue, DoWhile, Empty, ExprStmt, For, ForIn,
    FunctionDecl, Identifier, If, Logical, Member, Node, NullLit, NumberLit,
    ObjectLit, Program, Property, RegexLit, Return, StringLit, TemplateLit,
    ThisExpr, Throw, Try, Unary, Update, VarDecl, VarDeclarator, While,
)
from .lexer import JsSyntaxError, Token, tokenize

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="}

# Binary operator precedence tiers, weakest first.
BINARY_TIERS = [
    {"|"},
    {"^"},
    {"&"},
    {"==", "!=", "===", "!=="},
    {"<", ">", "<=", ">=", "in", "instanceof"},
    {"<<", ">>"},
    {"+", "-"},
    {"*", "/", "%"},
]

UNARY_OPS = {"!", "~", "+", "-", "typeof", "void", "delete"}


def parse(text: str) -> Program:
    """Parse source text into a Program node."""
    return _Parser(text).parse_program()


class _Parser:
    def __init__(self, text: str, tokens: list[Token] | None = None):
        self.text = text
        self.toks = tokens if tokens is not None else tokenize(text)
        self.pos = 0

    # Token plumbing -----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        idx = min(self.pos + offset, len(self.toks) - 1)
        return self.toks[idx]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if not tok.is_punct(text):
            raise JsSyntaxError(
                f"unexpected {tok.text!r}", tok.line, tok.col, expected={text})
        return self.advance()

    def expect_name(self) -> Token:
        tok = self.peek()
        if tok.kind != "name":
            raise JsSyntaxError(
                f"unexpected {tok.text or tok.kind!r}", tok.line, tok.col,
                expected={"identifier"})
        return self.advance()

    def eat_punct(self, text: str) -> bool:
        if self.peek().is_punct(text):
            self.advance()
            return True
        return False

    def eat_keyword(self, word: str) -> bool:
        if self.peek().is_keyword(word):
            self.advance()
            return True
        return False

    def _eat_semicolon(self) -> int | None:
        """Consume a statement terminator, returning the end offset of an
        explicit ";" so the statement span can cover it."""
        tok = self.peek()
        if tok.is_punct(";"):
            self.advance()
            return tok.end
        if tok.kind == "eof" or tok.is_punct("}"):
            return None
        prev = self.toks[self.pos - 1] if self.pos else tok
        if tok.line > prev.line:
            return None
        raise JsSyntaxError(
            f"unexpected {tok.text!r}", tok.line, tok.col, expected={";"})

    def _newline_before(self) -> bool:
        if self.pos == 0:
            return False
        return self.peek().line > self.toks[self.pos - 1].line

    # Statements ---------------------------------------------------------

    def parse_program(self) -> Program:
        body: list[Node] = []
        while self.peek().kind != "eof":
            body.append(self.parse_statement())
        return Program(0, len(self.text), body=body)

    def parse_statement(self) -> Node:
        tok = self.peek()
        if tok.is_punct("{"):
            return self.parse_block()
        if tok.is_punct(";"):
            self.advance()
            return Empty(tok.start, tok.end)
        if tok.kind == "keyword":
            word = tok.text
            if word in ("var", "let", "const"):
                return self.parse_var_decl()
            if word == "function":
                return self.parse_function(is_async=False, is_expression=False)
            if word == "async" and self.peek(1).is_keyword("function"):
                self.advance()
                return self.parse_function(is_async=True, is_expression=False, start=tok.start)
            if word == "return":
                return self.parse_return()
            if word == "if":
                return self.parse_if()
            if word == "while":
                return self.parse_while()
            if word == "do":
                return self.parse_do_while()
            if word == "for":
                return self.parse_for()
            if word == "try":
                return self.parse_try()
            if word == "throw":
                self.advance()
                arg = self.parse_expression()
                semi = self._eat_semicolon()
                return Throw(tok.start, semi or arg.end, argument=arg)
            if word == "break":
                self.advance()
                semi = self._eat_semicolon()
                return Break(tok.start, semi or tok.end)
            if word == "continue":
                self.advance()
                semi = self._eat_semicolon()
                return Continue(tok.start, semi or tok.end)
        expr = self.parse_expression()
        semi = self._eat_semicolon()
        return ExprStmt(expr.start, semi or expr.end, expr=expr)

    def parse_block(self) -> Block:
        open_tok = self.expect_punct("{")
        body: list[Node] = []
        while not self.peek().is_punct("}"):
            if self.peek().kind == "eof":
                raise JsSyntaxError("unterminated block", open_tok.line, open_tok.col)
            body.append(self.parse_statement())
        close = self.advance()
        return Block(open_tok.start, close.end, body=body)

    def parse_var_decl(self) -> VarDecl:
        kw = self.advance()
        decls: list[VarDeclarator] = []
        while True:
            name_tok = self.expect_name()
            init = None
            end = name_tok.end
            if self.eat_punct("="):
                init = self.parse_assignment()
                end = init.end
            decls.append(VarDeclarator(name_tok.start, end, name=name_tok.text, init=init))
            if not self.eat_punct(","):
                break
        semi = self._eat_semicolon()
        return VarDecl(kw.start, semi or decls[-1].end, decl_kind=kw.text, decls=decls)

    def parse_function(self, is_async: bool, is_expression: bool, start: int | None = None) -> FunctionDecl:
        kw = self.advance()  # "function"
        begin = kw.start if start is None else start
        name = ""
        if self.peek().kind == "name":
            name = self.advance().text
        elif not is_expression:
            tok = self.peek()
            raise JsSyntaxError("function declaration needs a name", tok.line, tok.col,
                                expected={"identifier"})
        params = self.parse_param_list()
        body = self.parse_block()
        return FunctionDecl(begin, body.end, name=name, params=params, body=body,
                            is_async=is_async, is_expression=is_expression)

    def parse_param_list(self) -> list[Identifier]:
        self.expect_punct("(")
        params: list[Identifier] = []
        while not self.peek().is_punct(")"):
            tok = self.expect_name()
            params.append(Identifier(tok.start, tok.end, name=tok.text))
            if not self.eat_punct(","):
                break
        self.expect_punct(")")
        return params

    def parse_return(self) -> Return:
        kw = self.advance()
        tok = self.peek()
        if tok.is_punct(";") or tok.is_punct("}") or tok.kind == "eof" or self._newline_before():
            semi = self._eat_semicolon()
            return Return(kw.start, semi or kw.end)
        arg = self.parse_expression()
        semi = self._eat_semicolon()
        return Return(kw.start, semi or arg.end, argument=arg)

    def parse_if(self) -> If:
        kw = self.advance()
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        then = self.parse_statement()
        orelse = None
        end = then.end
        if self.eat_keyword("else"):
            orelse = self.parse_statement()
            end = orelse.end
        return If(kw.start, end, test=test, then=then, orelse=orelse)

    def parse_while(self) -> While:
        kw = self.advance()
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return While(kw.start, body.end, test=test, body=body)

    def parse_do_while(self) -> DoWhile:
        kw = self.advance()
        body = self.parse_statement()
        if not self.eat_keyword("while"):
            tok = self.peek()
            raise JsSyntaxError("do without while", tok.line, tok.col, expected={"while"})
        self.expect_punct("(")
        test = self.parse_expression()
        close = self.expect_punct(")")
        semi = self._eat_semicolon()
        return DoWhile(kw.start, semi or close.end, body=body, test=test)

    def parse_for(self) -> Node:
        kw = self.advance()
        self.expect_punct("(")
        init: Node | None = None
        if self.peek().is_punct(";"):
            self.advance()
        else:
            if self.peek().kind == "keyword" and self.peek().text in ("var", "let", "const"):
                decl_kw = self.advance()
                name_tok = self.expect_name()
                nxt = self.peek()
                if nxt.is_keyword("in") or nxt.is_keyword("of"):
                    is_of = nxt.text == "of"
                    self.advance()
                    right = self.parse_expression()
                    self.expect_punct(")")
                    body = self.parse_statement()
                    left = VarDecl(decl_kw.start, name_tok.end, decl_kind=decl_kw.text,
                                   decls=[VarDeclarator(name_tok.start, name_tok.end,
                                                        name=name_tok.text)])
                    return ForIn(kw.start, body.end, left=left, right=right,
                                 body=body, is_of=is_of)
                decls = [self._finish_declarator(name_tok)]
                while self.eat_punct(","):
                    decls.append(self._finish_declarator(self.expect_name()))
                init = VarDecl(decl_kw.start, decls[-1].end, decl_kind=decl_kw.text, decls=decls)
            else:
                init_expr = self.parse_expression()
                nxt = self.peek()
                if nxt.is_keyword("in") or nxt.is_keyword("of"):
                    is_of = nxt.text == "of"
                    self.advance()
                    right = self.parse_expression()
                    self.expect_punct(")")
                    body = self.parse_statement()
                    return ForIn(kw.start, body.end, left=init_expr, right=right,
                                 body=body, is_of=is_of)
                init = ExprStmt(init_expr.start, init_expr.end, expr=init_expr)
            self.expect_punct(";")
        test = None
        if not self.peek().is_punct(";"):
            test = self.parse_expression()
        self.expect_punct(";")
        update = None
        if not self.peek().is_punct(")"):
            update = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return For(kw.start, body.end, init=init, test=test, update=update, body=body)

    def _finish_declarator(self, name_tok: Token) -> VarDeclarator:
        init = None
        end = name_tok.end
        if self.eat_punct("="):
            init = self.parse_assignment()
            end = init.end
        return VarDeclarator(name_tok.start, end, name=name_tok.text, init=init)

    def parse_try(self) -> Try:
        kw = self.advance()
        block = self.parse_block()
        catch_param = None
        handler = None
        finalizer = None
        end = block.end
        if self.eat_keyword("catch"):
            if self.eat_punct("("):
                catch_param = self.expect_name().text
                self.expect_punct(")")
            handler = self.parse_block()
            end = handler.end
        if self.eat_keyword("finally"):
            finalizer = self.parse_block()
            end = finalizer.end
        if handler is None and finalizer is None:
            tok = self.peek()
            raise JsSyntaxError("try without catch or finally", tok.line, tok.col,
                                expected={"catch", "finally"})
        return Try(kw.start, end, block=block, catch_param=catch_param,
                   handler=handler, finalizer=finalizer)

    # Expressions --------------------------------------------------------

    def parse_expression(self) -> Node:
        expr = self.parse_assignment()
        while self.peek().is_punct(","):
            self.advance()
            right = self.parse_assignment()
            expr = Binary(expr.start, right.end, op=",", left=expr, right=right)
        return expr

    def parse_assignment(self) -> Node:
        arrow = self._try_parse_arrow()
        if arrow is not None:
            return arrow
        left = self.parse_conditional()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ASSIGN_OPS:
            if left.kind not in ("Identifier", "Member"):
                raise JsSyntaxError("invalid assignment target", tok.line, tok.col)
            self.advance()
            right = self.parse_assignment()
            return Assign(left.start, right.end, op=tok.text, target=left, value=right)
        return left

    def _try_parse_arrow(self) -> ArrowFunction | None:
        """Detect `x => ...`, `(a, b) => ...`, and async variants."""
        start_pos = self.pos
        tok = self.peek()
        is_async = False
        begin = tok.start
        if tok.is_keyword("async") and self.peek(1).line == tok.line and (
                self.peek(1).kind == "name" or self.peek(1).is_punct("(")):
            is_async = True
            self.advance()
            tok = self.peek()
        if tok.kind == "name" and self.peek(1).is_punct("=>"):
            self.advance()
            params = [Identifier(tok.start, tok.end, name=tok.text)]
            return self._finish_arrow(begin, params, is_async)
        if tok.is_punct("(") and self._paren_leads_to_arrow():
            params = self.parse_param_list()
            return self._finish_arrow(begin, params, is_async)
        self.pos = start_pos
        return None

    def _paren_leads_to_arrow(self) -> bool:
        depth = 0
        i = self.pos
        while i < len(self.toks):
            t = self.toks[i]
            if t.is_punct("("):
                depth += 1
            elif t.is_punct(")"):
                depth -= 1
                if depth == 0:
                    nxt = self.toks[i + 1] if i + 1 < len(self.toks) else None
                    return bool(nxt and nxt.is_punct("=>"))
            elif t.kind == "eof":
                return False
            elif depth == 1 and not (t.kind == "name" or t.is_punct(",")):
                return False
            i += 1
        return False

    def _finish_arrow(self, begin: int, params: list[Identifier], is_async: bool) -> ArrowFunction:
        self.expect_punct("=>")
        if self.peek().is_punct("{"):
            body: Node = self.parse_block()
        else:
            body = self.parse_assignment()
        return ArrowFunction(begin, body.end, params=params, body=body, is_async=is_async)

    def parse_conditional(self) -> Node:
        test = self.parse_logical_or()
        if self.eat_punct("?"):
            consequent = self.parse_assignment()
            self.expect_punct(":")
            alternate = self.parse_assignment()
            return Conditional(test.start, alternate.end, test=test,
                               consequent=consequent, alternate=alternate)
        return test

    def parse_logical_or(self) -> Node:
        left = self.parse_logical_and()
        while self.peek().is_punct("||"):
            self.advance()
            right = self.parse_logical_and()
            left = Logical(left.start, right.end, op="||", left=left, right=right)
        return left

    def parse_logical_and(self) -> Node:
        left = self.parse_binary(0)
        while self.peek().is_punct("&&"):
            self.advance()
            right = self.parse_binary(0)
            left = Logical(left.start, right.end, op="&&", left=left, right=right)
        return left

    def parse_binary(self, tier: int) -> Node:
        if tier >= len(BINARY_TIERS):
            return self.parse_unary()
        ops = BINARY_TIERS[tier]
        left = self.parse_binary(tier + 1)
        while True:
            tok = self.peek()
            text = tok.text
            matches = (tok.kind == "punct" and text in ops) or (
                tok.kind == "keyword" and text in ops)
            if not matches:
                return left
            self.advance()
            right = self.parse_binary(tier + 1)
            left = Binary(left.start, right.end, op=text, left=left, right=right)

    def parse_unary(self) -> Node:
        tok = self.peek()
        if (tok.kind == "punct" and tok.text in ("!", "~", "+", "-")) or (
                tok.kind == "keyword" and tok.text in ("typeof", "void", "delete")):
            self.advance()
            operand = self.parse_unary()
            return Unary(tok.start, operand.end, op=tok.text, operand=operand)
        if tok.is_punct("++") or tok.is_punct("--"):
            self.advance()
            operand = self.parse_unary()
            return Update(tok.start, operand.end, op=tok.text, operand=operand, prefix=True)
        if tok.is_keyword("await"):
            self.advance()
            operand = self.parse_unary()
            return Await(tok.start, operand.end, operand=operand)
        return self.parse_postfix()

    def parse_postfix(self) -> Node:
        expr = self.parse_call_chain()
        tok = self.peek()
        if (tok.is_punct("++") or tok.is_punct("--")) and tok.line == self.toks[self.pos - 1].line:
            self.advance()
            return Update(expr.start, tok.end, op=tok.text, operand=expr, prefix=False)
        return expr

    def parse_call_chain(self) -> Node:
        if self.peek().is_keyword("new"):
            kw = self.advance()
            callee = self.parse_member_only(self.parse_primary())
            args: list[Node] = []
            end = callee.end
            if self.peek().is_punct("("):
                args, end = self.parse_arguments()
            expr: Node = Call(kw.start, end, callee=callee, args=args, is_new=True)
            return self.parse_call_tail(expr)
        return self.parse_call_tail(self.parse_primary())

    def parse_member_only(self, expr: Node) -> Node:
        """Member accesses only, used for `new` callees."""
        while True:
            if self.eat_punct("."):
                name_tok = self.expect_name()
                expr = Member(expr.start, name_tok.end, obj=expr, prop=name_tok.text)
            elif self.peek().is_punct("["):
                self.advance()
                idx = self.parse_expression()
                close = self.expect_punct("]")
                expr = Member(expr.start, close.end, obj=expr, computed=idx)
            else:
                return expr

    def parse_call_tail(self, expr: Node) -> Node:
        while True:
            tok = self.peek()
            if tok.is_punct("."):
                self.advance()
                name_tok = self.peek()
                if name_tok.kind not in ("name", "keyword"):
                    raise JsSyntaxError("expected property name", name_tok.line,
                                        name_tok.col, expected={"identifier"})
                self.advance()
                expr = Member(expr.start, name_tok.end, obj=expr, prop=name_tok.text)
            elif tok.is_punct("["):
                self.advance()
                idx = self.parse_expression()
                close = self.expect_punct("]")
                expr = Member(expr.start, close.end, obj=expr, computed=idx)
            elif tok.is_punct("("):
                args, end = self.parse_arguments()
                expr = Call(expr.start, end, callee=expr, args=args)
            else:
                return expr

    def parse_arguments(self) -> tuple[list[Node], int]:
        self.expect_punct("(")
        args: list[Node] = []
        while not self.peek().is_punct(")"):
            args.append(self.parse_assignment())
            if not self.eat_punct(","):
                break
        close = self.expect_punct(")")
        return args, close.end

    def parse_primary(self) -> Node:
        tok = self.peek()
        if tok.kind == "name":
            self.advance()
            return Identifier(tok.start, tok.end, name=tok.text)
        if tok.kind == "num":
            self.advance()
            return NumberLit(tok.start, tok.end, value=tok.text)
        if tok.kind == "str":
            self.advance()
            return StringLit(tok.start, tok.end, value=tok.text[1:-1])
        if tok.kind == "regex":
            self.advance()
            return RegexLit(tok.start, tok.end, value=tok.text)
        if tok.kind == "template":
            self.advance()
            exprs = [_parse_subexpression(self.text, s, e) for s, e in tok.expr_spans]
            return TemplateLit(tok.start, tok.end, quasis=list(tok.parts), exprs=exprs)
        if tok.kind == "keyword":
            if tok.text in ("true", "false"):
                self.advance()
                return BoolLit(tok.start, tok.end, value=tok.text == "true")
            if tok.text == "null":
                self.advance()
                return NullLit(tok.start, tok.end)
            if tok.text == "this":
                self.advance()
                return ThisExpr(tok.start, tok.end)
            if tok.text == "function":
                return self.parse_function(is_async=False, is_expression=True)
            if tok.text == "async" and self.peek(1).is_keyword("function"):
                self.advance()
                return self.parse_function(is_async=True, is_expression=True, start=tok.start)
        if tok.is_punct("("):
            self.advance()
            expr = self.parse_expression()
            self.expect_punct(")")
            return expr
        if tok.is_punct("["):
            self.advance()
            items: list[Node] = []
            while not self.peek().is_punct("]"):
                items.append(self.parse_assignment())
                if not self.eat_punct(","):
                    break
            close = self.expect_punct("]")
            return ArrayLit(tok.start, close.end, items=items)
        if tok.is_punct("{"):
            return self.parse_object_literal()
        raise JsSyntaxError(
            f"unexpected {tok.text or tok.kind!r}", tok.line, tok.col,
            expected={"expression"})

    def parse_object_literal(self) -> ObjectLit:
        open_tok = self.expect_punct("{")
        props: list[Property] = []
        while not self.peek().is_punct("}"):
            key_tok = self.peek()
            if key_tok.is_punct("["):
                self.advance()
                key_expr = self.parse_assignment()
                self.expect_punct("]")
                self.expect_punct(":")
                value = self.parse_assignment()
                props.append(Property(key_tok.start, value.end, key="*",
                                      value=value, computed_key=key_expr))
            elif key_tok.kind in ("name", "keyword", "str", "num"):
                self.advance()
                key = key_tok.text[1:-1] if key_tok.kind == "str" else key_tok.text
                if self.eat_punct(":"):
                    value = self.parse_assignment()
                    props.append(Property(key_tok.start, value.end, key=key, value=value))
                else:
                    # shorthand {a} is sugar for {a: a}
                    if key_tok.kind != "name":
                        raise JsSyntaxError("expected ':'", key_tok.line, key_tok.col,
                                            expected={":"})
                    ident = Identifier(key_tok.start, key_tok.end, name=key)
                    props.append(Property(key_tok.start, key_tok.end, key=key, value=ident))
            else:
                raise JsSyntaxError("expected property key", key_tok.line, key_tok.col,
                                    expected={"identifier", "string", "number"})
            if not self.eat_punct(","):
                break
        close = self.expect_punct("}")
        return ObjectLit(open_tok.start, close.end, props=props)


def _parse_subexpression(text: str, start: int, end: int) -> Node:
    """Parse a template-literal expression, keeping spans file-relative."""
    padded = " " * start + text[start:end]
    sub = _Parser(padded)
    expr = sub.parse_expression()
    tok = sub.peek()
    if tok.kind != "eof":
        raise JsSyntaxError("trailing tokens in template expression", tok.line, tok.col)
    return expr
