"""WebSocket endpoint and log replay."""

import pytest
from fastapi.testclient import TestClient

from sketchdbg import corpus
from sketchdbg.gutter import GutterGeometry
from sketchdbg.protocol import (
    PROTOCOL_VERSION,
    Error,
    Header,
    InkFeedback,
    LoadProgram,
    ProtocolError,
    SpiralTick,
    StateUpdate,
    Stroke,
    StrokeBegin,
    StrokeEnd,
    StrokePoints,
    Warning as Warn,
    WimpCommand,
    decode,
    dump_log,
    encode,
)
from sketchdbg.service import build_app, replay
from sketchdbg.stroke import Point
from synth import gesture_points
from test_session import GEO, spiral_stroke_points, tap_points


@pytest.fixture(scope="module")
def client():
    return TestClient(build_app())


def test_info_endpoint(client):
    body = client.get("/").json()
    assert body["protocolVersion"] == PROTOCOL_VERSION
    assert body["programs"] == ["variation1", "variation2"]


def test_program_endpoint(client):
    body = client.get("/programs/variation1").json()
    assert body["source"] == corpus.load("variation1")
    assert client.get("/programs/nope").status_code == 404


def send(ws, msg):
    ws.send_text(encode(msg))


def recv(ws):
    return decode(ws.receive_text())


def test_ws_session_flow(client):
    with client.websocket_connect("/ws") as ws:
        send(ws, LoadProgram(corpus.load("variation1"), GEO, "sketch"))
        assert isinstance(recv(ws), StateUpdate)

        send(ws, Stroke(1, tap_points(5)))
        fb = recv(ws)
        assert fb == InkFeedback(1, True)
        assert recv(ws).breakpoints == (5,)

        send(ws, Stroke(2, tuple(gesture_points("start", origin=(200.0, 50.0)))))
        assert recv(ws) == InkFeedback(2, True, "start")
        su = recv(ws)
        assert su.phase == "paused" and su.current_line == 5


def test_ws_bad_frames_answered_not_fatal(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_text('{"type":"wimp","name":')
        err = recv(ws)
        assert isinstance(err, Error) and "parse" in err.text

        ws.send_text('{"type":"timeTravel"}')
        assert "unknown message type" in recv(ws).text

        # connection still works afterwards
        send(ws, LoadProgram("x = 1\n", GEO, "sketch"))
        assert isinstance(recv(ws), StateUpdate)


def test_ws_rejects_clock_regressions(client):
    with client.websocket_connect("/ws") as ws:
        send(ws, LoadProgram("x = 1\n", GEO, "sketch"))
        recv(ws)
        send(ws, StrokeBegin(1))
        send(ws, StrokePoints(1, (Point(200.0, 50.0, 100.0),)))
        send(ws, StrokePoints(1, (Point(201.0, 50.0, 40.0),)))
        err = recv(ws)
        assert isinstance(err, Error) and "non-decreasing" in err.text


def test_ws_fragmented_spiral_stroke(client):
    pts = spiral_stroke_points("stepOver", n_ticks=19)
    with client.websocket_connect("/ws") as ws:
        send(ws, LoadProgram(corpus.load("variation1"), GEO, "sketch"))
        send(ws, Stroke(1, tap_points(5)))
        send(ws, Stroke(2, tuple(gesture_points("start", origin=(200.0, 50.0)))))
        send(ws, StrokeBegin(3))
        for i in range(0, len(pts), 16):      # pointer batches
            send(ws, StrokePoints(3, pts[i:i + 16]))
        send(ws, StrokeEnd(3, pts[-1].t))

        got = [recv(ws) for _ in range(1 + 2 + 2 + 2 + 19 * 2)]
        ticks = [m for m in got if isinstance(m, SpiralTick)]
        assert [t.steps_total for t in ticks] == list(range(1, 20))
        last = got[-1]
        assert isinstance(last, StateUpdate) and last.phase == "paused"

        # queue is fully drained: a probe round-trips immediately
        send(ws, WimpCommand("stop", "click"))
        assert isinstance(recv(ws), Warn)


# --- replay -----------------------------------------------------------------


def scenario_log():
    header = Header(version=PROTOCOL_VERSION, program="variation1",
                    mode="sketch", gutter_geometry=GEO)
    msgs = [
        Stroke(1, tap_points(5)),
        Stroke(2, tuple(gesture_points("start", origin=(200.0, 50.0)))),
        Stroke(3, spiral_stroke_points("stepOver", n_ticks=19)),
    ]
    return dump_log(header, msgs)


def test_replay_reconstructs_session():
    rr = replay(scenario_log())
    assert rr.report["actions"] == 3
    assert rr.report["strokes"] == 3
    assert rr.report["finalPhase"] == "paused"
    assert len(rr.report["pausedLineHistory"]) == 21
    assert sum(isinstance(m, SpiralTick) for m in rr.messages) == 19


def test_replay_is_byte_stable():
    a = replay(scenario_log())
    b = replay(scenario_log())
    assert a.report_json() == b.report_json()
    assert a.transcript() == b.transcript()
    assert a.transcript().count("\n") == len(a.messages)
    for line in a.transcript().splitlines():
        decode(line)                   # every line is a valid message


def test_replay_with_recorded_load():
    header = Header(PROTOCOL_VERSION, "adhoc", "wimp", GEO)
    msgs = [
        LoadProgram(corpus.load("variation1"), GEO, "wimp"),
        WimpCommand("toggleBreakpoint", "click", line=5),
        WimpCommand("start", "keypress"),
    ]
    rr = replay(dump_log(header, msgs))
    assert rr.report == {
        "actions": 2, "strokes": 0, "clicks": 1, "keypresses": 1,
        "finalPhase": "paused", "consoleText": "",
        "pausedLineHistory": [5],
    }


def test_replay_mode_mismatch_rejected():
    header = Header(PROTOCOL_VERSION, "adhoc", "sketch", GEO)
    msgs = [LoadProgram("x = 1\n", GEO, "wimp")]
    with pytest.raises(ProtocolError, match="does not match"):
        replay(dump_log(header, msgs))


def test_replay_unknown_program_needs_source():
    header = Header(PROTOCOL_VERSION, "mystery", "sketch", GEO)
    log = dump_log(header, [Stroke(1, tap_points(5))])
    with pytest.raises(ProtocolError, match="unknown program 'mystery'"):
        replay(log)
    rr = replay(log, source="x = 1\ny = 2\n")
    assert rr.session.breakpoints == set()  # line 5 is past this program


def test_replay_source_override_swaps_program():
    header = Header(PROTOCOL_VERSION, "variation1", "sketch", GEO)
    log = dump_log(header, [
        LoadProgram(corpus.load("variation1"), GEO, "sketch"),
        Stroke(1, tap_points(15)),
    ])
    assert replay(log).session.breakpoints == {15}
    swapped = replay(log, source=corpus.load("variation2"))
    assert swapped.session.breakpoints == set()   # v2 ends at line 13
