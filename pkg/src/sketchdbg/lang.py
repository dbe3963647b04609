"""Tokenizer and parser for the little language the debugger executes.

The subset is deliberately narrow: function definitions, while/if,
single-target assignment, return, expression statements, integer
literals, names (functions are first-class values), calls, arithmetic
(+ - * // %), comparisons, and boolean operators. Floats, strings,
containers, `for`, and true division are rejected with a pointed
message rather than half-supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

KEYWORDS = frozenset({"def", "while", "if", "elif", "else", "return",
                      "and", "or", "not"})

# recognized so the error can say "unsupported construct" instead of
# silently parsing them as plain names
RESERVED = frozenset({
    "for", "in", "class", "import", "from", "lambda", "pass", "break",
    "continue", "global", "nonlocal", "del", "try", "except", "finally",
    "raise", "with", "as", "is", "assert", "yield", "async", "await",
    "True", "False", "None", "match", "case",
})

COMPARE_OPS = ("<", "<=", ">", ">=", "==", "!=")
ADD_OPS = ("+", "-")
MUL_OPS = ("*", "//", "%")


class LangSyntaxError(Exception):
    """Syntax error with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # NAME NUMBER OP KEYWORD NEWLINE INDENT DEDENT EOF
    text: str
    line: int
    col: int


# --- AST --------------------------------------------------------------------

@dataclass
class Module:
    body: list


@dataclass
class FunctionDef:
    name: str
    params: list[str]
    body: list
    line: int


@dataclass
class While:
    cond: object
    body: list
    line: int


@dataclass
class If:
    cond: object
    then: list
    orelse: list
    line: int


@dataclass
class Assign:
    target: str
    expr: object
    line: int


@dataclass
class Return:
    expr: object | None
    line: int


@dataclass
class ExprStmt:
    expr: object
    line: int


@dataclass
class Call:
    callee: object
    args: list
    line: int


@dataclass
class Name:
    id: str
    line: int


@dataclass
class IntLit:
    value: int
    line: int


@dataclass
class BinOp:
    op: str
    left: object
    right: object
    line: int


@dataclass
class Compare:
    op: str
    left: object
    right: object
    line: int


@dataclass
class Not:
    operand: object
    line: int


@dataclass
class Neg:
    # unary minus; kept separate from BinOp so constant negation stays
    # a single evaluation step
    operand: object
    line: int


@dataclass
class BoolOp:
    op: str  # "and" | "or"
    values: list
    line: int


@dataclass
class LineTable:
    executable: set[int] = field(default_factory=set)
    statement_at: dict[int, object] = field(default_factory=dict)


# --- tokenizer ---------------------------------------------------------------

def _scan_line(text: str, line_no: int, start_col: int) -> Iterator[Token]:
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = start_col + i
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            return
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in KEYWORDS:
                yield Token("KEYWORD", word, line_no, col)
            elif word in RESERVED:
                raise LangSyntaxError(
                    f"unsupported construct: {word!r}", line_no, col)
            else:
                yield Token("NAME", word, line_no, col)
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j < n and (text[j] == "." or text[j].isalpha()):
                raise LangSyntaxError(
                    "only integer literals are supported", line_no, col)
            yield Token("NUMBER", text[i:j], line_no, col)
            i = j
            continue
        two = text[i:i + 2]
        if two in ("==", "!=", "<=", ">=", "//"):
            yield Token("OP", two, line_no, col)
            i += 2
            continue
        if ch == "/":
            raise LangSyntaxError(
                "true division '/' is not supported (use '//')", line_no, col)
        if ch in "+-*%<>=(),:":
            yield Token("OP", ch, line_no, col)
            i += 1
            continue
        raise LangSyntaxError(f"illegal character {ch!r}", line_no, col)


def tokenize(source: str) -> list[Token]:
    """Indentation-aware token stream with synthetic INDENT/DEDENT."""
    tokens: list[Token] = []
    indents = [""]
    line_no = 0
    for raw in source.splitlines():
        line_no += 1
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        ws_len = len(raw) - len(raw.lstrip(" \t"))
        ws = raw[:ws_len]
        if ws != indents[-1]:
            if ws.startswith(indents[-1]):
                indents.append(ws)
                tokens.append(Token("INDENT", ws, line_no, 1))
            else:
                while len(indents) > 1 and indents[-1] != ws:
                    if not indents[-1].startswith(ws) and not ws.startswith(indents[-1]):
                        raise LangSyntaxError(
                            "inconsistent indentation (mixed tabs/spaces?)",
                            line_no, 1)
                    indents.pop()
                    tokens.append(Token("DEDENT", "", line_no, 1))
                if indents[-1] != ws:
                    raise LangSyntaxError(
                        "unindent does not match any outer block", line_no, 1)
        body = raw[ws_len:]
        produced = list(_scan_line(body, line_no, ws_len + 1))
        if produced:
            tokens.extend(produced)
            tokens.append(Token("NEWLINE", "", line_no, len(raw) + 1))
    end_line = line_no + 1
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token("DEDENT", "", end_line, 1))
    tokens.append(Token("EOF", "", end_line, 1))
    return tokens


# --- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise LangSyntaxError(message, tok.line, tok.col)

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text if tok.text else tok.kind
            self.fail(f"expected {want!r}, found {got!r}")
        return self.next()

    def at_op(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.text in texts

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "KEYWORD" and tok.text in words

    # statements

    def parse_module(self) -> Module:
        body = []
        while self.peek().kind != "EOF":
            body.append(self.statement())
        return Module(body)

    def statement(self):
        tok = self.peek()
        if tok.kind == "KEYWORD":
            if tok.text == "def":
                return self.funcdef()
            if tok.text == "while":
                return self.while_stmt()
            if tok.text == "if":
                return self.if_stmt()
            if tok.text == "return":
                return self.return_stmt()
            if tok.text in ("elif", "else"):
                self.fail(f"{tok.text!r} without matching 'if'")
        return self.simple_stmt()

    def funcdef(self) -> FunctionDef:
        start = self.expect("KEYWORD", "def")
        name = self.expect("NAME").text
        self.expect("OP", "(")
        params: list[str] = []
        if not self.at_op(")"):
            params.append(self.expect("NAME").text)
            while self.at_op(","):
                self.next()
                params.append(self.expect("NAME").text)
        self.expect("OP", ")")
        self.expect("OP", ":")
        body = self.block()
        if len(set(params)) != len(params):
            raise LangSyntaxError("duplicate parameter name",
                                  start.line, start.col)
        return FunctionDef(name, params, body, start.line)

    def while_stmt(self) -> While:
        start = self.expect("KEYWORD", "while")
        cond = self.expression()
        self.expect("OP", ":")
        return While(cond, self.block(), start.line)

    def if_stmt(self) -> If:
        start = self.expect("KEYWORD", "if")
        cond = self.expression()
        self.expect("OP", ":")
        then = self.block()
        orelse: list = []
        if self.at_keyword("elif"):
            elif_tok = self.peek()
            # rewrite `elif` as an `if` nested in the else branch
            self.tokens[self.pos] = Token("KEYWORD", "if",
                                          elif_tok.line, elif_tok.col)
            orelse = [self.if_stmt()]
        elif self.at_keyword("else"):
            self.next()
            self.expect("OP", ":")
            orelse = self.block()
        return If(cond, then, orelse, start.line)

    def return_stmt(self) -> Return:
        start = self.expect("KEYWORD", "return")
        expr = None
        if self.peek().kind != "NEWLINE":
            expr = self.expression()
        self.expect("NEWLINE")
        return Return(expr, start.line)

    def simple_stmt(self):
        tok = self.peek()
        if tok.kind == "NAME" and self.tokens[self.pos + 1].kind == "OP" \
                and self.tokens[self.pos + 1].text == "=":
            self.next()
            self.next()
            expr = self.expression()
            self.expect("NEWLINE")
            return Assign(tok.text, expr, tok.line)
        expr = self.expression()
        self.expect("NEWLINE")
        return ExprStmt(expr, tok.line)

    def block(self) -> list:
        self.expect("NEWLINE")
        self.expect("INDENT")
        body = [self.statement()]
        while self.peek().kind not in ("DEDENT", "EOF"):
            body.append(self.statement())
        self.expect("DEDENT")
        return body

    # expressions; precedence: or < and < not < comparison < additive
    # < multiplicative < unary < call

    def expression(self):
        return self.or_expr()

    def or_expr(self):
        first = self.and_expr()
        if not self.at_keyword("or"):
            return first
        values = [first]
        line = self.peek().line
        while self.at_keyword("or"):
            self.next()
            values.append(self.and_expr())
        return BoolOp("or", values, line)

    def and_expr(self):
        first = self.not_expr()
        if not self.at_keyword("and"):
            return first
        values = [first]
        line = self.peek().line
        while self.at_keyword("and"):
            self.next()
            values.append(self.not_expr())
        return BoolOp("and", values, line)

    def not_expr(self):
        if self.at_keyword("not"):
            tok = self.next()
            return Not(self.not_expr(), tok.line)
        return self.comparison()

    def comparison(self):
        left = self.additive()
        if self.at_op(*COMPARE_OPS):
            op = self.next()
            right = self.additive()
            if self.at_op(*COMPARE_OPS):
                self.fail("chained comparisons are not supported")
            return Compare(op.text, left, right, op.line)
        return left

    def additive(self):
        node = self.multiplicative()
        while self.at_op(*ADD_OPS):
            op = self.next()
            node = BinOp(op.text, node, self.multiplicative(), op.line)
        return node

    def multiplicative(self):
        node = self.unary()
        while self.at_op(*MUL_OPS):
            op = self.next()
            node = BinOp(op.text, node, self.unary(), op.line)
        return node

    def unary(self):
        if self.at_op("-"):
            tok = self.next()
            return Neg(self.unary(), tok.line)
        return self.postfix()

    def postfix(self):
        node = self.atom()
        while self.at_op("("):
            open_tok = self.next()
            args = []
            if not self.at_op(")"):
                args.append(self.expression())
                while self.at_op(","):
                    self.next()
                    args.append(self.expression())
            self.expect("OP", ")")
            node = Call(node, args, open_tok.line)
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.next()
            return IntLit(int(tok.text), tok.line)
        if tok.kind == "NAME":
            self.next()
            return Name(tok.text, tok.line)
        if self.at_op("("):
            self.next()
            inner = self.expression()
            self.expect("OP", ")")
            return inner
        got = tok.text if tok.text else tok.kind
        self.fail(f"unexpected {got!r} in expression")


def _collect_lines(stmts: list, table: LineTable) -> None:
    for stmt in stmts:
        table.executable.add(stmt.line)
        table.statement_at[stmt.line] = stmt
        if isinstance(stmt, FunctionDef):
            _collect_lines(stmt.body, table)
        elif isinstance(stmt, While):
            _collect_lines(stmt.body, table)
        elif isinstance(stmt, If):
            _collect_lines(stmt.then, table)
            _collect_lines(stmt.orelse, table)


def parse(source: str) -> tuple[Module, LineTable]:
    """Parse source text; raises LangSyntaxError on the first problem."""
    module = _Parser(tokenize(source)).parse_module()
    table = LineTable()
    _collect_lines(module.body, table)
    return module, table


# --- pretty printer (round-trip checks, trace labels) -------------------------

def pretty_expr(node) -> str:
    match node:
        case IntLit(value=v):
            return str(v)
        case Name(id=i):
            return i
        case Neg(operand=o):
            return f"(-{pretty_expr(o)})"
        case Not(operand=o):
            return f"(not {pretty_expr(o)})"
        case BinOp(op=op, left=l, right=r):
            return f"({pretty_expr(l)} {op} {pretty_expr(r)})"
        case Compare(op=op, left=l, right=r):
            return f"({pretty_expr(l)} {op} {pretty_expr(r)})"
        case BoolOp(op=op, values=vs):
            return "(" + f" {op} ".join(pretty_expr(v) for v in vs) + ")"
        case Call(callee=c, args=a):
            return f"{pretty_expr(c)}({', '.join(pretty_expr(x) for x in a)})"
    raise TypeError(f"not an expression node: {node!r}")


def pretty(module: Module) -> str:
    out: list[str] = []

    def emit(stmts: list, depth: int) -> None:
        pad = "    " * depth
        for stmt in stmts:
            match stmt:
                case FunctionDef(name=n, params=ps, body=b):
                    out.append(f"{pad}def {n}({', '.join(ps)}):")
                    emit(b, depth + 1)
                case While(cond=c, body=b):
                    out.append(f"{pad}while {pretty_expr(c)}:")
                    emit(b, depth + 1)
                case If(cond=c, then=t, orelse=e):
                    out.append(f"{pad}if {pretty_expr(c)}:")
                    emit(t, depth + 1)
                    if e:
                        out.append(f"{pad}else:")
                        emit(e, depth + 1)
                case Assign(target=t, expr=x):
                    out.append(f"{pad}{t} = {pretty_expr(x)}")
                case Return(expr=None):
                    out.append(f"{pad}return")
                case Return(expr=x):
                    out.append(f"{pad}return {pretty_expr(x)}")
                case ExprStmt(expr=x):
                    out.append(f"{pad}{pretty_expr(x)}")
                case _:
                    raise TypeError(f"not a statement node: {stmt!r}")

    emit(module.body, 0)
    return "\n".join(out) + "\n"


def dump(node) -> str:
    """Structural form with line numbers elided; used to compare ASTs."""
    match node:
        case Module(body=b):
            return "(module " + " ".join(dump(s) for s in b) + ")"
        case FunctionDef(name=n, params=ps, body=b):
            return f"(def {n} [{' '.join(ps)}] " + \
                " ".join(dump(s) for s in b) + ")"
        case While(cond=c, body=b):
            return f"(while {dump(c)} " + " ".join(dump(s) for s in b) + ")"
        case If(cond=c, then=t, orelse=e):
            return (f"(if {dump(c)} [" + " ".join(dump(s) for s in t) +
                    "] [" + " ".join(dump(s) for s in e) + "])")
        case Assign(target=t, expr=x):
            return f"(= {t} {dump(x)})"
        case Return(expr=None):
            return "(return)"
        case Return(expr=x):
            return f"(return {dump(x)})"
        case ExprStmt(expr=x):
            return f"(expr {dump(x)})"
        case Call(callee=c, args=a):
            return f"(call {dump(c)} " + " ".join(dump(x) for x in a) + ")"
        case Name(id=i):
            return i
        case IntLit(value=v):
            return str(v)
        case Neg(operand=o):
            return f"(neg {dump(o)})"
        case Not(operand=o):
            return f"(not {dump(o)})"
        case BinOp(op=op, left=l, right=r) | Compare(op=op, left=l, right=r):
            return f"({op} {dump(l)} {dump(r)})"
        case BoolOp(op=op, values=vs):
            return f"({op} " + " ".join(dump(v) for v in vs) + ")"
    raise TypeError(f"unknown node: {node!r}")
