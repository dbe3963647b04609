"""Regenerate the recorded server-message scripts the UI tests run against.

Each fixture is a faithful request/reply capture from the backend session
layer, serialized in wire form: ``{"steps": [{"send": ..., "recv": [...]}]}``.
Run from the repo root after any protocol or session change:

    python3 frontend/tests/fixtures/record.py
"""

import json
from pathlib import Path

from sketchdbg import corpus
from sketchdbg.gutter import GutterGeometry
from sketchdbg.protocol import (
    LoadProgram,
    StrokeBegin,
    StrokeEnd,
    StrokePoints,
    WimpCommand,
    to_jsonable,
)
from sketchdbg.session import Session
from sketchdbg.stroke import Point

HERE = Path(__file__).parent

GEO = GutterGeometry(x_min=0.0, x_max=40.0, line_height=18.0,
                     top_offset=4.0, first_line=1, line_count=15)


def tap(line, t0=0.0):
    y = GEO.top_offset + (line - GEO.first_line) * GEO.line_height \
        + GEO.line_height / 2
    return [Point(20.0, y, t0 + 10.0 * i) for i in range(3)]


def gesture(kind, origin):
    import sys
    sys.path.insert(0, str(HERE.parents[2] / "tests"))
    from synth import gesture_points
    return gesture_points(kind, origin=origin)


def record(session, messages):
    steps = []
    for msg in messages:
        replies = session.handle(msg)
        steps.append({"send": to_jsonable(msg),
                      "recv": [to_jsonable(r) for r in replies]})
    return steps


def fragmented(stroke_id, points, t0=0.0):
    pts = [Point(p.x, p.y, p.t + t0) if p.t < t0 else p for p in points]
    return [StrokeBegin(stroke_id),
            StrokePoints(stroke_id, tuple(pts)),
            StrokeEnd(stroke_id)]


def write(name, program, mode, steps):
    payload = {"program": program, "mode": mode,
               "source": corpus.load(program), "steps": steps}
    path = HERE / name
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path} ({len(steps)} steps)")


def sketch_session():
    src = corpus.load("variation1")
    s = Session()
    msgs = [LoadProgram(source=src, gutter_geometry=GEO, mode="sketch")]
    msgs += fragmented(1, tap(5))
    msgs += fragmented(2, gesture("start", (200.0, 50.0)))
    msgs += fragmented(3, gesture("stepOver", (420.0, 220.0)))
    msgs += fragmented(4, tap(9))
    msgs += fragmented(5, tap(9))
    msgs += fragmented(6, gesture("stop", (200.0, 50.0)))
    write("sketch_session.json", "variation1", "sketch", record(s, msgs))


def warn_no_breakpoints():
    src = corpus.load("variation1")
    s = Session()
    msgs = [LoadProgram(source=src, gutter_geometry=GEO, mode="sketch")]
    msgs += fragmented(1, gesture("start", (200.0, 50.0)))
    write("warn_nobps.json", "variation1", "sketch", record(s, msgs))


def wimp_session():
    src = corpus.load("variation1")
    s = Session()
    msgs = [LoadProgram(source=src, gutter_geometry=GEO, mode="wimp"),
            WimpCommand("toggleBreakpoint", "click", line=5),
            WimpCommand("start", "keypress"),
            WimpCommand("stepOver", "keypress"),
            WimpCommand("stop", "keypress")]
    write("wimp_session.json", "variation1", "wimp", record(s, msgs))


if __name__ == "__main__":
    sketch_session()
    warn_no_breakpoints()
    wimp_session()
