"""Tree-walking interpreter that pre-executes a program into a trace.

The debugger never runs code interactively; it navigates this recorded
trace. Each Line event snapshots state BEFORE its statement executes, so
"paused at line L" shows the world as of just before L, exactly like the
stock interpreter's line-tracing hooks. Calls push a frame and emit a
Call event (argument values already bound); Return events carry the value
while the frame is still on the stack.

Integers are 64-bit signed; arithmetic that leaves that range is a
runtime error rather than silent wraparound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import lang
from .lang import (
    Assign,
    BinOp,
    BoolOp,
    Call,
    Compare,
    ExprStmt,
    FunctionDef,
    If,
    IntLit,
    LineTable,
    Module,
    Name,
    Neg,
    Not,
    Return,
    While,
)

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1

DEFAULT_MAX_EVENTS = 100_000

LINE = "line"
CALL = "call"
RETURN = "return"
END = "end"


@dataclass(frozen=True)
class FunctionRef:
    name: str
    node: FunctionDef

    def __repr__(self) -> str:
        return f"<function {self.name}>"


Value = object  # int | bool | FunctionRef | None


@dataclass(frozen=True)
class FrameSummary:
    function: str
    line: int
    depth: int


@dataclass(frozen=True)
class TraceEvent:
    index: int
    kind: str  # line | call | return | end
    line: int
    depth: int
    locals: dict[str, Value]        # top frame, copied at emission time
    stack: tuple[FrameSummary, ...]  # bottom (module) to top
    return_value: Optional[Value] = None
    console_delta: str = ""


@dataclass(frozen=True)
class Outcome:
    status: str  # "completed" | "runtimeError" | "limitExceeded"
    top_value: Optional[Value] = None
    error: str = ""
    error_line: int = 0


@dataclass
class Trace:
    events: list[TraceEvent]
    outcome: Outcome

    def console_text(self, upto: Optional[int] = None) -> str:
        last = len(self.events) if upto is None else upto + 1
        return "".join(e.console_delta for e in self.events[:last])


@dataclass
class Limits:
    max_events: int = DEFAULT_MAX_EVENTS


class ExecError(Exception):
    """Runtime fault inside the interpreted program."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.message = message
        self.line = line


class _LimitReached(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value: Value):
        self.value = value


@dataclass
class _Frame:
    function: str
    locals: dict[str, Value]
    call_line: int
    depth: int
    current_line: int = 0


def _check_int(value: int, line: int) -> int:
    if not (INT_MIN <= value <= INT_MAX):
        raise ExecError("integer overflow (64-bit range exceeded)", line)
    return value


def _truthy(value: Value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value != 0
    if value is None:
        return False
    return True  # function references


def render_value(value: Value) -> str:
    if value is None:
        return "None"
    if isinstance(value, bool):
        return "True" if value else "False"
    return repr(value) if not isinstance(value, int) else str(value)


class _Interp:
    def __init__(self, module: Module, limits: Limits):
        self.module = module
        self.limits = limits
        self.events: list[TraceEvent] = []
        self.stack: list[_Frame] = []
        self.pending_console = ""
        self.last_top_value: Value = None

    # --- event plumbing ---

    def emit(self, kind: str, line: int,
             return_value: Optional[Value] = None) -> None:
        if len(self.events) >= self.limits.max_events:
            raise _LimitReached()
        top = self.stack[-1]
        top.current_line = line if kind != RETURN else top.current_line
        summaries = tuple(
            FrameSummary(f.function, f.current_line, f.depth)
            for f in self.stack
        )
        self.events.append(TraceEvent(
            index=len(self.events),
            kind=kind,
            line=line,
            depth=top.depth,
            locals=dict(top.locals),
            stack=summaries,
            return_value=return_value,
            console_delta=self.pending_console,
        ))
        self.pending_console = ""

    # --- execution ---

    def run(self) -> Trace:
        first_line = self.module.body[0].line if self.module.body else 1
        self.stack.append(_Frame("<module>", {}, first_line, 0))
        try:
            self.emit(CALL, first_line)
            for stmt in self.module.body:
                self.exec_stmt(stmt)
            self.emit(END, self.stack[-1].current_line)
            outcome = Outcome("completed", top_value=self.last_top_value)
        except ExecError as err:
            outcome = Outcome("runtimeError", error=err.message,
                              error_line=err.line)
        except _LimitReached:
            outcome = Outcome(
                "limitExceeded",
                error=f"event limit {self.limits.max_events} exceeded "
                      "(infinite loop suspected)")
        return Trace(self.events, outcome)

    def exec_stmt(self, stmt) -> None:
        self.emit(LINE, stmt.line)
        match stmt:
            case FunctionDef(name=name):
                self.stack[-1].locals[name] = FunctionRef(name, stmt)
            case Assign(target=target, expr=expr):
                self.stack[-1].locals[target] = self.eval(expr)
            case Return(expr=expr, line=line):
                value = None if expr is None else self.eval(expr)
                if len(self.stack) == 1:
                    raise ExecError("'return' outside function", line)
                raise _ReturnSignal(value)
            case ExprStmt(expr=expr):
                value = self.eval(expr)
                if len(self.stack) == 1:
                    self.last_top_value = value
            case While(cond=cond, body=body, line=line):
                while _truthy(self.eval(cond)):
                    for inner in body:
                        self.exec_stmt(inner)
                    self.emit(LINE, line)
            case If(cond=cond, then=then, orelse=orelse):
                branch = then if _truthy(self.eval(cond)) else orelse
                for inner in branch:
                    self.exec_stmt(inner)
            case _:
                raise ExecError(f"cannot execute node {stmt!r}", stmt.line)

    def lookup(self, name: str, line: int) -> Value:
        top = self.stack[-1]
        if name in top.locals:
            return top.locals[name]
        module_frame = self.stack[0]
        if name in module_frame.locals:
            return module_frame.locals[name]
        raise ExecError(f"name {name!r} is not defined", line)

    def eval(self, node) -> Value:
        match node:
            case IntLit(value=v):
                return v
            case Name(id=name, line=line):
                return self.lookup(name, line)
            case Neg(operand=operand, line=line):
                value = self.eval(operand)
                self.require_number(value, "-", line)
                return _check_int(-value, line)
            case Not(operand=operand):
                return not _truthy(self.eval(operand))
            case BinOp():
                return self.eval_binop(node)
            case Compare():
                return self.eval_compare(node)
            case BoolOp(op=op, values=values):
                result: Value = None
                for sub in values:
                    result = self.eval(sub)
                    if op == "and" and not _truthy(result):
                        return result
                    if op == "or" and _truthy(result):
                        return result
                return result
            case Call():
                return self.eval_call(node)
        raise ExecError(f"cannot evaluate node {node!r}",
                        getattr(node, "line", 0))

    def require_number(self, value: Value, op: str, line: int) -> None:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ExecError(
                f"unsupported operand for {op!r}: {render_value(value)}", line)

    def eval_binop(self, node: BinOp) -> Value:
        left = self.eval(node.left)
        right = self.eval(node.right)
        self.require_number(left, node.op, node.line)
        self.require_number(right, node.op, node.line)
        match node.op:
            case "+":
                out = left + right
            case "-":
                out = left - right
            case "*":
                out = left * right
            case "//":
                if right == 0:
                    raise ExecError("integer division by zero", node.line)
                out = left // right
            case "%":
                if right == 0:
                    raise ExecError("modulo by zero", node.line)
                out = left % right
            case _:
                raise ExecError(f"unknown operator {node.op!r}", node.line)
        return _check_int(out, node.line)

    def eval_compare(self, node: Compare) -> Value:
        left = self.eval(node.left)
        right = self.eval(node.right)
        if node.op in ("==", "!="):
            equal = left == right
            return equal if node.op == "==" else not equal
        self.require_number(left, node.op, node.line)
        self.require_number(right, node.op, node.line)
        match node.op:
            case "<":
                return left < right
            case "<=":
                return left <= right
            case ">":
                return left > right
            case ">=":
                return left >= right
        raise ExecError(f"unknown comparison {node.op!r}", node.line)

    def is_bound(self, name: str) -> bool:
        return name in self.stack[-1].locals or name in self.stack[0].locals

    def eval_call(self, node: Call) -> Value:
        if isinstance(node.callee, Name) and node.callee.id == "print" \
                and not self.is_bound("print"):
            # builtin print (shadowable): feeds the debug console
            args = [self.eval(a) for a in node.args]
            self.pending_console += " ".join(render_value(a) for a in args) + "\n"
            return None
        callee = self.eval(node.callee)
        if not isinstance(callee, FunctionRef):
            raise ExecError(
                f"{render_value(callee)} is not callable", node.line)
        args = [self.eval(a) for a in node.args]
        fn = callee.node
        if len(args) != len(fn.params):
            raise ExecError(
                f"{callee.name}() takes {len(fn.params)} arguments, "
                f"got {len(args)}", node.line)
        if len(self.stack) > 200:
            raise ExecError("call stack depth limit exceeded", node.line)
        frame = _Frame(callee.name, dict(zip(fn.params, args)),
                       call_line=node.line, depth=len(self.stack))
        frame.current_line = fn.line
        self.stack.append(frame)
        self.emit(CALL, fn.line)
        result: Value = None
        try:
            for stmt in fn.body:
                self.exec_stmt(stmt)
        except _ReturnSignal as sig:
            result = sig.value
        self.emit(RETURN, self.stack[-1].current_line, return_value=result)
        self.stack.pop()
        return result


def build_trace(module: Module, table: LineTable | None = None,
                limits: Limits | None = None) -> Trace:
    """Execute the module once, recording every step.

    The line table argument is accepted for interface symmetry (session
    owns one anyway) but the interpreter does not need it.
    """
    del table
    return _Interp(module, limits or Limits()).run()


def locals_at(trace: Trace, index: int) -> tuple[dict[str, Value],
                                                 tuple[FrameSummary, ...]]:
    """Snapshot view at an event: (top-frame locals, stack summaries)."""
    if not (0 <= index < len(trace.events)):
        raise IndexError(f"trace index {index} out of range")
    event = trace.events[index]
    return dict(event.locals), event.stack


# --- canonical serialization ---------------------------------------------------

def _value_to_json(value: Value):
    if value is None or isinstance(value, (bool, int)):
        return value
    return repr(value)


def event_to_json(event: TraceEvent) -> dict:
    doc = {
        "index": event.index,
        "kind": event.kind,
        "line": event.line,
        "depth": event.depth,
        "locals": {k: _value_to_json(v) for k, v in event.locals.items()},
        "stack": [
            {"function": f.function, "line": f.line, "depth": f.depth}
            for f in event.stack
        ],
    }
    if event.return_value is not None:
        doc["returnValue"] = _value_to_json(event.return_value)
    if event.console_delta:
        doc["consoleDelta"] = event.console_delta
    return doc


def trace_to_json(trace: Trace) -> str:
    doc = {
        "outcome": {
            "status": trace.outcome.status,
            "topValue": _value_to_json(trace.outcome.top_value),
            "error": trace.outcome.error,
            "errorLine": trace.outcome.error_line,
        },
        "events": [event_to_json(e) for e in trace.events],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def trace_program(source: str, limits: Limits | None = None) -> Trace:
    """Parse and pre-execute source text in one call."""
    module, _ = lang.parse(source)
    return build_trace(module, limits=limits)
