"""Debug-session state machine.

Owns the breakpoint set, the trace cursor, the per-session action ledger,
and the stroke pipeline (gutter mark -> spiral continuation -> symbolic
gesture). All methods return the server messages the transition produced,
in sending order; InkFeedback for a stroke always precedes any StateUpdate
that stroke caused.

The action metric counts discrete interaction units: one per completed
stroke in sketch mode (accepted or not; a spiral and its base gesture are
one stroke), one per click or keypress in WIMP mode. Input arriving in the
wrong mode warns and is NOT counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .engine import (
    END,
    LINE,
    FunctionRef,
    Limits,
    Trace,
    TraceEvent,
    build_trace,
)
from .gutter import GutterGeometry, apply_gutter_mark, is_gutter_stroke, lines_spanned
from .lang import LangSyntaxError, LineTable, Module, parse
from .protocol import (
    Error,
    InkFeedback,
    LoadProgram,
    ServerMessage,
    SetMode,
    SpiralTick,
    StateUpdate,
    Stroke,
    StrokeBegin,
    StrokeEnd,
    StrokePoints,
    Warning,
    WimpCommand,
)
from .recognizer import (
    FLOW_KINDS,
    MIN_EXTENT,
    SCORE_THRESHOLD,
    GestureTemplate,
    recognize,
    template_library,
)
from .spiral import SpiralController, SpiralParams
from .stroke import Point

IDLE = "idle"
PAUSED = "paused"
TERMINATED = "terminated"

SKETCH = "sketch"
WIMP = "wimp"

#: WIMP command names that map 1:1 onto debugger commands.
COMMAND_NAMES = ("start", "stop", "stepInto", "stepOver", "stepOut", "continue")


@dataclass(frozen=True)
class ActionRecord:
    seq: int
    kind: str                   # stroke | click | keypress
    t: float
    resolved: str | None = None  # command name, "toggleBreakpoint", or None


@dataclass
class _InFlightStroke:
    id: int
    pointer: str
    spiral: SpiralController
    points: list[Point] = field(default_factory=list)
    base_done: bool = False      # base command already ran at dwell time


def _value_to_json(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, FunctionRef):
        return repr(value)
    return str(value)


class Session:
    """One debugging session; mutate only from a single command sequence."""

    def __init__(self,
                 templates: Sequence[GestureTemplate] | None = None,
                 spiral_params: SpiralParams | None = None,
                 threshold: float = SCORE_THRESHOLD,
                 min_extent: float = MIN_EXTENT,
                 limits: Limits | None = None):
        self.templates = list(templates) if templates else template_library()
        self.spiral_params = spiral_params or SpiralParams()
        self.threshold = threshold
        self.min_extent = min_extent
        self.limits = limits or Limits()

        self.mode = SKETCH
        self.phase = IDLE
        self.module: Module | None = None
        self.line_table: LineTable | None = None
        self.geometry: GutterGeometry | None = None
        self.trace: Trace | None = None
        self.cursor: int | None = None
        self.breakpoints: set[int] = set()
        self.console = ""
        self.actions: list[ActionRecord] = []
        self.paused_lines: list[int] = []
        self._stroke: _InFlightStroke | None = None

    # ------------------------------------------------------------------
    # message entry point

    def handle(self, msg) -> list[ServerMessage]:
        match msg:
            case LoadProgram():
                return self.load(msg)
            case SetMode(mode):
                return self.set_mode(mode)
            case WimpCommand():
                return self.wimp(msg)
            case StrokeBegin(id_, pointer, _):
                return self.stroke_begin(id_, pointer)
            case StrokePoints(id_, points):
                return self.stroke_points(id_, points)
            case StrokeEnd(id_, t):
                return self.stroke_end(id_, t)
            case Stroke(id_, points, pointer):
                out = self.stroke_begin(id_, pointer)
                out += self.stroke_points(id_, points)
                out += self.stroke_end(id_, points[-1].t if points else 0.0)
                return out
        return [Error(f"unhandled message {type(msg).__name__}")]

    # ------------------------------------------------------------------
    # program / mode

    def load(self, msg: LoadProgram) -> list[ServerMessage]:
        if msg.mode not in (SKETCH, WIMP):
            return [Error(f"unknown mode: {msg.mode!r}")]
        try:
            module, table = parse(msg.source)
        except LangSyntaxError as e:
            return [Error(f"syntax error at line {e.line}, col {e.col}: {e.message}")]
        self.module = module
        self.line_table = table
        self.geometry = msg.gutter_geometry
        self.mode = msg.mode
        self.phase = IDLE
        self.trace = None
        self.cursor = None
        self.breakpoints = set()
        self.console = ""
        self._stroke = None
        return [self.state_update()]

    def set_mode(self, mode: str) -> list[ServerMessage]:
        if mode not in (SKETCH, WIMP):
            return [Error(f"unknown mode: {mode!r}")]
        self.mode = mode
        return []

    # ------------------------------------------------------------------
    # WIMP input

    def wimp(self, msg: WimpCommand) -> list[ServerMessage]:
        if self.mode != WIMP:
            return [Warning("toolbar input is disabled in sketch mode")]
        if msg.input_kind not in ("click", "keypress"):
            return [Error(f"unknown inputKind: {msg.input_kind!r}")]
        if msg.name == "toggleBreakpoint":
            if msg.line is None:
                return [Error("toggleBreakpoint requires a line")]
            self._record(msg.input_kind, msg.t or 0.0, "toggleBreakpoint")
            return self._apply_breakpoint_range(msg.line, msg.line)
        if msg.name not in COMMAND_NAMES:
            return [Error(f"unknown command: {msg.name!r}")]
        self._record(msg.input_kind, msg.t or 0.0, msg.name)
        return self.execute(msg.name)

    # ------------------------------------------------------------------
    # sketch input

    def stroke_begin(self, stroke_id: int, pointer: str = "pen") -> list[ServerMessage]:
        self._stroke = _InFlightStroke(
            id=stroke_id, pointer=pointer,
            spiral=SpiralController(params=self.spiral_params))
        return []

    def stroke_points(self, stroke_id: int,
                      points: Sequence[Point]) -> list[ServerMessage]:
        s = self._stroke
        if s is None or s.id != stroke_id:
            return [Warning(f"points for unknown stroke {stroke_id}")]
        if self.mode != SKETCH:
            s.points.extend(points)      # recorded but inert
            return []
        out: list[ServerMessage] = []
        for p in points:
            s.points.append(p)
            fed = s.spiral.feed_point(p)
            if fed.dwell_detected:
                out.extend(self._resolve_dwell(s))
            for _ in range(fed.ticks):
                out.extend(self._spiral_tick(s))
        return out

    def stroke_end(self, stroke_id: int, t: float) -> list[ServerMessage]:
        s = self._stroke
        self._stroke = None
        if s is None or s.id != stroke_id:
            return [Warning(f"end for unknown stroke {stroke_id}")]
        s.spiral.finish()
        if self.mode != SKETCH:
            return [Warning("sketch input is disabled in wimp mode")]
        if s.base_done:                  # spiral stroke: all done at dwell
            self._record("stroke", t, s.spiral.base_kind)
            return []
        out = self._dispatch_stroke(s)
        resolved = None
        for m in out:
            if isinstance(m, InkFeedback) and m.accepted:
                resolved = m.kind or "toggleBreakpoint"
        self._record("stroke", t, resolved)
        return out

    def _resolve_dwell(self, s: _InFlightStroke) -> list[ServerMessage]:
        """Pen held still mid-stroke: decide whether the prefix is a
        repeatable flow gesture."""
        prefix = s.spiral.prefix_points()
        xys = [p.xy() for p in prefix]
        if self.geometry is not None and is_gutter_stroke(xys, self.geometry):
            s.spiral.confirm_base(None)   # gutter marks never spin
            return []
        r = recognize(xys, self.templates, self.threshold, self.min_extent)
        if not r.accepted or r.kind not in FLOW_KINDS:
            s.spiral.confirm_base(None)   # stays grey; stroke may continue
            return []
        s.spiral.confirm_base(r.kind)
        s.base_done = True
        out: list[ServerMessage] = [InkFeedback(s.id, True, r.kind)]
        out.extend(self.execute(r.kind))
        return out

    def _spiral_tick(self, s: _InFlightStroke) -> list[ServerMessage]:
        kind = s.spiral.base_kind
        if kind is None:
            return []
        if self.phase != PAUSED:
            s.spiral.finish()             # program over: ticks cease
            return []
        out: list[ServerMessage] = [SpiralTick(s.id, s.spiral.steps_emitted)]
        out.extend(self.execute(kind))
        return out

    def _dispatch_stroke(self, s: _InFlightStroke) -> list[ServerMessage]:
        xys = [p.xy() for p in s.points]
        if not xys:
            return [InkFeedback(s.id, False)]
        if self.geometry is not None and is_gutter_stroke(xys, self.geometry):
            lo, hi = lines_spanned(xys, self.geometry)
            return self._apply_breakpoint_range(lo, hi, stroke_id=s.id)
        r = recognize(xys, self.templates, self.threshold, self.min_extent)
        if not r.accepted:
            return [InkFeedback(s.id, False)]
        return [InkFeedback(s.id, True, r.kind)] + self.execute(r.kind)

    # ------------------------------------------------------------------
    # breakpoints

    def _apply_breakpoint_range(self, lo: int, hi: int,
                                stroke_id: int | None = None) -> list[ServerMessage]:
        executable = self.line_table.executable if self.line_table else set()
        update = apply_gutter_mark((lo, hi), self.breakpoints, executable)
        self.breakpoints = (self.breakpoints - update.cleared) | update.set
        out: list[ServerMessage] = []
        if stroke_id is not None:
            out.append(InkFeedback(stroke_id, update.changed))
        if update.warning:
            out.append(Warning(update.warning))
        if update.changed:
            out.append(self.state_update())
        return out

    # ------------------------------------------------------------------
    # debugger commands

    def execute(self, name: str) -> list[ServerMessage]:
        if self.module is None:
            return [Warning("no program loaded")]
        if name == "start":
            return self._start()
        if name == "stop":
            if self.phase != PAUSED:
                return [Warning("no active session")]
            self.phase = TERMINATED
            return [self.state_update()]
        # stepping commands
        if self.phase != PAUSED:
            return [Warning("no active session")]
        assert self.trace is not None and self.cursor is not None
        target = self._step_target(name)
        if target is None:
            return self._terminate_off_end()
        prev = self.cursor
        self.cursor = target
        event = self.trace.events[target]
        self.console += self._console_between(prev, target)
        self.paused_lines.append(event.line)
        return [self.state_update()]

    def _start(self) -> list[ServerMessage]:
        if not self.breakpoints:
            return [Warning("cannot start: no breakpoints are set")]
        self.trace = build_trace(self.module, self.line_table, self.limits)
        self.cursor = None
        self.console = ""
        first = next((e for e in self.trace.events
                      if e.kind == LINE and e.line in self.breakpoints), None)
        if first is None:
            return self._terminate_off_end()
        self.phase = PAUSED
        self.cursor = first.index
        self.console = self._console_between(-1, first.index)
        self.paused_lines.append(first.line)
        return [self.state_update()]

    def _step_target(self, name: str) -> int | None:
        events = self.trace.events
        here = events[self.cursor]
        depth = here.depth
        for e in events[self.cursor + 1:]:
            if e.kind != LINE:
                continue
            hit_bp = e.line in self.breakpoints
            if name == "stepInto":
                return e.index
            if name == "stepOver" and (e.depth <= depth or hit_bp):
                return e.index
            if name == "stepOut" and (e.depth < depth or hit_bp):
                return e.index
            if name == "continue" and hit_bp:
                return e.index
        return None

    @property
    def _prev_cursor(self) -> int:
        return self.cursor if self.cursor is not None else -1

    def _terminate_off_end(self) -> list[ServerMessage]:
        assert self.trace is not None
        last = len(self.trace.events) - 1
        self.console += self._console_between(self._prev_cursor, last)
        self.cursor = None
        self.phase = TERMINATED
        out: list[ServerMessage] = [self.state_update()]
        outcome = self.trace.outcome
        if outcome.status == "runtimeError":
            out.append(Error(
                f"runtime error at line {outcome.error_line}: {outcome.error}"))
        elif outcome.status == "limitExceeded":
            out.append(Error("event limit exceeded; infinite loop suspected"))
        return out

    def _console_between(self, after: int, upto: int) -> str:
        """Console deltas of events in (after, upto]."""
        assert self.trace is not None
        return "".join(
            e.console_delta for e in self.trace.events[after + 1:upto + 1]
            if e.console_delta)

    # ------------------------------------------------------------------
    # outputs

    def state_update(self) -> StateUpdate:
        line = None
        variables: dict = {}
        stack: tuple = ()
        if self.phase == PAUSED and self.trace is not None:
            event: TraceEvent = self.trace.events[self.cursor]
            line = event.line
            variables = {k: _value_to_json(v) for k, v in event.locals.items()}
            stack = tuple({"function": f.function, "line": f.line,
                           "depth": f.depth} for f in event.stack)
        return StateUpdate(
            phase=self.phase, current_line=line, variables=variables,
            call_stack=stack, breakpoints=tuple(sorted(self.breakpoints)),
            console=self.console)

    def _record(self, kind: str, t: float, resolved: str | None) -> None:
        self.actions.append(ActionRecord(len(self.actions), kind, t, resolved))

    @property
    def action_count(self) -> int:
        return len(self.actions)

    def counts(self) -> dict[str, int]:
        by = {"stroke": 0, "click": 0, "keypress": 0}
        for a in self.actions:
            by[a.kind] += 1
        return by

    def report(self) -> dict:
        by = self.counts()
        return {
            "actions": self.action_count,
            "strokes": by["stroke"],
            "clicks": by["click"],
            "keypresses": by["keypress"],
            "finalPhase": self.phase,
            "consoleText": self.console,
            "pausedLineHistory": list(self.paused_lines),
        }
