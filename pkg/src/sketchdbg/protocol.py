"""Wire protocol: typed client/server messages and their JSON codec.

One JSON object per message/frame. Field names on the wire are camelCase;
unknown fields are ignored on decode so clients can annotate freely, but an
unknown `type` or a missing required field is a ProtocolError (the service
replies with an Error message rather than dropping the frame silently).

The stroke log format is JSON Lines: one `header` record, then time-ordered
client messages. `stroke` is a compact single-record form of the
begin/points/end triple, convenient for hand-written logs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from .gutter import GutterGeometry
from .stroke import Point

PROTOCOL_VERSION = 1


class ProtocolError(ValueError):
    pass


# --- client messages ------------------------------------------------------


@dataclass(frozen=True)
class LoadProgram:
    source: str
    gutter_geometry: GutterGeometry
    mode: str = "sketch"


@dataclass(frozen=True)
class StrokeBegin:
    id: int
    pointer: str = "pen"
    t: float = 0.0


@dataclass(frozen=True)
class StrokePoints:
    id: int
    points: tuple[Point, ...]


@dataclass(frozen=True)
class StrokeEnd:
    id: int
    t: float = 0.0


@dataclass(frozen=True)
class Stroke:
    """Compact one-record stroke: begin + points + end."""
    id: int
    points: tuple[Point, ...]
    pointer: str = "pen"


@dataclass(frozen=True)
class WimpCommand:
    name: str
    input_kind: str           # click | keypress
    line: int | None = None   # toggleBreakpoint target
    t: float | None = None    # virtual-clock stamp for logs


@dataclass(frozen=True)
class SetMode:
    mode: str


# --- server messages ------------------------------------------------------


@dataclass(frozen=True)
class StateUpdate:
    phase: str                           # idle | paused | terminated
    current_line: int | None
    variables: dict[str, Any]
    call_stack: tuple[dict[str, Any], ...]
    breakpoints: tuple[int, ...]
    console: str


@dataclass(frozen=True)
class InkFeedback:
    stroke_id: int
    accepted: bool
    kind: str | None = None


@dataclass(frozen=True)
class SpiralTick:
    stroke_id: int
    steps_total: int


@dataclass(frozen=True)
class Warning:
    text: str


@dataclass(frozen=True)
class Error:
    text: str


# --- log header -----------------------------------------------------------


@dataclass(frozen=True)
class Header:
    version: int
    program: str
    mode: str
    gutter_geometry: GutterGeometry


ClientMessage = (LoadProgram | StrokeBegin | StrokePoints | StrokeEnd
                 | Stroke | WimpCommand | SetMode)
ServerMessage = StateUpdate | InkFeedback | SpiralTick | Warning | Error
Message = ClientMessage | ServerMessage | Header


# --- codec ----------------------------------------------------------------


def _geometry_to_json(g: GutterGeometry) -> dict[str, Any]:
    return {"xMin": g.x_min, "xMax": g.x_max, "lineHeight": g.line_height,
            "topOffset": g.top_offset, "firstLine": g.first_line,
            "lineCount": g.line_count}


def _geometry_from_json(obj: Any) -> GutterGeometry:
    if not isinstance(obj, dict):
        raise ProtocolError("gutterGeometry must be an object")
    try:
        return GutterGeometry(
            x_min=float(obj["xMin"]), x_max=float(obj["xMax"]),
            line_height=float(obj["lineHeight"]),
            top_offset=float(obj["topOffset"]),
            first_line=int(obj.get("firstLine", 1)),
            line_count=int(obj.get("lineCount", 1)))
    except KeyError as e:
        raise ProtocolError(f"gutterGeometry missing field {e.args[0]!r}")
    except ValueError as e:
        raise ProtocolError(f"bad gutterGeometry: {e}")


def _points_to_json(points: Sequence[Point]) -> list[list[float]]:
    return [[p.x, p.y, p.t] for p in points]


def _points_from_json(obj: Any) -> tuple[Point, ...]:
    if not isinstance(obj, list):
        raise ProtocolError("points must be an array of [x, y, t]")
    out = []
    for row in obj:
        if not isinstance(row, list) or len(row) != 3:
            raise ProtocolError("points must be an array of [x, y, t]")
        out.append(Point(float(row[0]), float(row[1]), float(row[2])))
    return tuple(out)


def to_jsonable(msg: Message) -> dict[str, Any]:
    match msg:
        case LoadProgram(source, geom, mode):
            return {"type": "load", "source": source, "mode": mode,
                    "gutterGeometry": _geometry_to_json(geom)}
        case StrokeBegin(id_, pointer, t):
            return {"type": "strokeBegin", "id": id_, "pointer": pointer,
                    "t": t}
        case StrokePoints(id_, points):
            return {"type": "strokePoints", "id": id_,
                    "points": _points_to_json(points)}
        case StrokeEnd(id_, t):
            return {"type": "strokeEnd", "id": id_, "t": t}
        case Stroke(id_, points, pointer):
            return {"type": "stroke", "id": id_, "pointer": pointer,
                    "points": _points_to_json(points)}
        case WimpCommand(name, input_kind, line, t):
            out: dict[str, Any] = {"type": "wimp", "name": name,
                                   "inputKind": input_kind}
            if line is not None:
                out["line"] = line
            if t is not None:
                out["t"] = t
            return out
        case SetMode(mode):
            return {"type": "setMode", "mode": mode}
        case StateUpdate(phase, line, variables, stack, bps, console):
            out = {"type": "stateUpdate", "phase": phase,
                   "variables": dict(variables),
                   "callStack": [dict(f) for f in stack],
                   "breakpoints": list(bps), "console": console}
            if line is not None:
                out["currentLine"] = line
            return out
        case InkFeedback(stroke_id, accepted, kind):
            out = {"type": "inkFeedback", "strokeId": stroke_id,
                   "accepted": accepted}
            if kind is not None:
                out["kind"] = kind
            return out
        case SpiralTick(stroke_id, steps_total):
            return {"type": "spiralTick", "strokeId": stroke_id,
                    "stepsTotal": steps_total}
        case Warning(text):
            return {"type": "warning", "text": text}
        case Error(text):
            return {"type": "error", "text": text}
        case Header(version, program, mode, geom):
            return {"type": "header", "version": version, "program": program,
                    "mode": mode, "gutterGeometry": _geometry_to_json(geom)}
    raise ProtocolError(f"cannot encode {type(msg).__name__}")


def encode(msg: Message) -> str:
    return json.dumps(to_jsonable(msg), sort_keys=True,
                      separators=(",", ":"))


def _require(obj: dict[str, Any], key: str, kinds: type | tuple) -> Any:
    if key not in obj:
        raise ProtocolError(f"missing field {key!r}")
    v = obj[key]
    if not isinstance(v, kinds):
        raise ProtocolError(f"field {key!r} has wrong type")
    return v


def from_jsonable(obj: Any) -> Message:
    if not isinstance(obj, dict):
        raise ProtocolError("message must be a JSON object")
    kind = obj.get("type")
    match kind:
        case "load":
            return LoadProgram(
                source=_require(obj, "source", str),
                gutter_geometry=_geometry_from_json(
                    _require(obj, "gutterGeometry", dict)),
                mode=_require(obj, "mode", str))
        case "strokeBegin":
            return StrokeBegin(id=int(_require(obj, "id", (int, float))),
                               pointer=str(obj.get("pointer", "pen")),
                               t=float(obj.get("t", 0.0)))
        case "strokePoints":
            return StrokePoints(id=int(_require(obj, "id", (int, float))),
                                points=_points_from_json(obj.get("points")))
        case "strokeEnd":
            return StrokeEnd(id=int(_require(obj, "id", (int, float))),
                             t=float(obj.get("t", 0.0)))
        case "stroke":
            return Stroke(id=int(_require(obj, "id", (int, float))),
                          points=_points_from_json(obj.get("points")),
                          pointer=str(obj.get("pointer", "pen")))
        case "wimp":
            line = obj.get("line")
            t = obj.get("t")
            return WimpCommand(
                name=_require(obj, "name", str),
                input_kind=_require(obj, "inputKind", str),
                line=None if line is None else int(line),
                t=None if t is None else float(t))
        case "setMode":
            return SetMode(mode=_require(obj, "mode", str))
        case "stateUpdate":
            return StateUpdate(
                phase=_require(obj, "phase", str),
                current_line=(None if obj.get("currentLine") is None
                              else int(obj["currentLine"])),
                variables=dict(_require(obj, "variables", dict)),
                call_stack=tuple(dict(f)
                                 for f in _require(obj, "callStack", list)),
                breakpoints=tuple(int(b)
                                  for b in _require(obj, "breakpoints", list)),
                console=_require(obj, "console", str))
        case "inkFeedback":
            kind_field = obj.get("kind")
            return InkFeedback(
                stroke_id=int(_require(obj, "strokeId", (int, float))),
                accepted=_require(obj, "accepted", bool),
                kind=None if kind_field is None else str(kind_field))
        case "spiralTick":
            return SpiralTick(
                stroke_id=int(_require(obj, "strokeId", (int, float))),
                steps_total=int(_require(obj, "stepsTotal", (int, float))))
        case "warning":
            return Warning(text=_require(obj, "text", str))
        case "error":
            return Error(text=_require(obj, "text", str))
        case "header":
            return Header(
                version=int(_require(obj, "version", (int, float))),
                program=_require(obj, "program", str),
                mode=_require(obj, "mode", str),
                gutter_geometry=_geometry_from_json(
                    _require(obj, "gutterGeometry", dict)))
        case None:
            raise ProtocolError("message has no 'type' field")
    raise ProtocolError(f"unknown message type: {kind!r}")


def decode(text: str | bytes) -> Message:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"parse: {e.msg} at position {e.pos}")
    return from_jsonable(obj)


# --- stroke logs ----------------------------------------------------------


def dump_log(header: Header, messages: Sequence[ClientMessage]) -> str:
    lines = [encode(header)]
    lines.extend(encode(m) for m in messages)
    return "\n".join(lines) + "\n"


def parse_log(text: str) -> tuple[Header, list[ClientMessage]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ProtocolError("empty log")
    header = decode(lines[0])
    if not isinstance(header, Header):
        raise ProtocolError("log must start with a header record")
    if header.version != PROTOCOL_VERSION:
        raise ProtocolError(
            f"unsupported log version: {header.version}")
    out: list[ClientMessage] = []
    for ln in lines[1:]:
        msg = decode(ln)
        if isinstance(msg, Header):
            raise ProtocolError("duplicate header record")
        if not isinstance(msg, (LoadProgram, StrokeBegin, StrokePoints,
                                StrokeEnd, Stroke, WimpCommand, SetMode)):
            raise ProtocolError(
                f"log may only contain client messages, got {type(msg).__name__}")
        out.append(msg)
    return header, out
