"""Wire-format round trips and decode hardening."""

import json
import random

import pytest

from sketchdbg.gutter import GutterGeometry
from sketchdbg.protocol import (
    PROTOCOL_VERSION,
    Error,
    Header,
    InkFeedback,
    LoadProgram,
    ProtocolError,
    SetMode,
    SpiralTick,
    StateUpdate,
    Stroke,
    StrokeBegin,
    StrokeEnd,
    StrokePoints,
    Warning,
    WimpCommand,
    decode,
    dump_log,
    encode,
    parse_log,
    to_jsonable,
)
from sketchdbg.stroke import Point

GEO = GutterGeometry(x_min=0.0, x_max=42.5, line_height=18.0,
                     top_offset=4.0, first_line=1, line_count=30)


def _rand_points(rng: random.Random) -> tuple[Point, ...]:
    n = rng.randrange(0, 8)
    t = 0.0
    pts = []
    for _ in range(n):
        t += rng.uniform(0.0, 25.0)
        pts.append(Point(rng.uniform(-50, 900), rng.uniform(-50, 700), t))
    return tuple(pts)


def _rand_message(rng: random.Random):
    # one builder per wire variant; the index doubles as coverage bookkeeping
    builders = [
        lambda: LoadProgram(source="x = 1\nprint(x)\n", gutter_geometry=GEO,
                            mode=rng.choice(["sketch", "wimp"])),
        lambda: StrokeBegin(id=rng.randrange(1000), pointer="pen",
                            t=rng.uniform(0, 1e6)),
        lambda: StrokePoints(id=rng.randrange(1000), points=_rand_points(rng)),
        lambda: StrokeEnd(id=rng.randrange(1000), t=rng.uniform(0, 1e6)),
        lambda: Stroke(id=rng.randrange(1000), points=_rand_points(rng)),
        lambda: WimpCommand(name=rng.choice(["start", "stop", "stepOver"]),
                            input_kind=rng.choice(["click", "keypress"]),
                            line=rng.choice([None, rng.randrange(1, 40)]),
                            t=rng.choice([None, rng.uniform(0, 1e6)])),
        lambda: SetMode(mode=rng.choice(["sketch", "wimp"])),
        lambda: StateUpdate(
            phase=rng.choice(["idle", "paused", "terminated"]),
            current_line=rng.choice([None, rng.randrange(1, 40)]),
            variables={"i": rng.randrange(100), "name": "x"},
            call_stack=({"function": "f", "line": 3, "depth": 1},),
            breakpoints=tuple(sorted(rng.sample(range(1, 30), 3))),
            console="1\n2\n"),
        lambda: InkFeedback(stroke_id=rng.randrange(1000),
                            accepted=rng.random() < 0.5,
                            kind=rng.choice([None, "start", "stepOut"])),
        lambda: SpiralTick(stroke_id=rng.randrange(1000),
                           steps_total=rng.randrange(1, 50)),
        lambda: Warning(text="no active session"),
        lambda: Error(text="syntax error at line 2, col 1: bad token"),
        lambda: Header(version=PROTOCOL_VERSION, program="variation1",
                       mode="sketch", gutter_geometry=GEO),
    ]
    return rng.choice(builders)()


def test_round_trip_all_variants_seeded():
    rng = random.Random(91)
    seen: set[type] = set()
    for _ in range(300):
        msg = _rand_message(rng)
        seen.add(type(msg))
        assert decode(encode(msg)) == msg
    assert len(seen) == 13  # every wire variant exercised


def test_encode_is_deterministic_and_compact():
    msg = StateUpdate(phase="paused", current_line=5,
                      variables={"b": 1, "a": 2}, call_stack=(),
                      breakpoints=(5, 9), console="")
    text = encode(msg)
    assert text == encode(msg)
    assert " " not in text
    # keys come out sorted, so logs diff cleanly
    obj = json.loads(text)
    assert list(obj) == sorted(obj)


def test_wimp_example_decodes():
    msg = decode('{"type":"wimp","name":"stepOver","inputKind":"click"}')
    assert msg == WimpCommand(name="stepOver", input_kind="click")
    assert msg.line is None and msg.t is None


def test_optional_fields_omitted_from_wire():
    assert "line" not in to_jsonable(WimpCommand("start", "click"))
    assert "kind" not in to_jsonable(InkFeedback(1, False))
    assert "currentLine" not in to_jsonable(
        StateUpdate("idle", None, {}, (), (), ""))


def test_points_wire_shape():
    obj = to_jsonable(Stroke(7, (Point(1.0, 2.0, 3.0), Point(4.0, 5.0, 6.0))))
    assert obj["points"] == [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]


def test_unknown_fields_are_ignored():
    msg = decode('{"type":"wimp","name":"start","inputKind":"click",'
                 '"futureField":123}')
    assert msg == WimpCommand(name="start", input_kind="click")


def test_malformed_json_raises():
    with pytest.raises(ProtocolError, match="parse"):
        decode('{"type":"wimp","name":')


def test_unknown_type_raises():
    with pytest.raises(ProtocolError, match="unknown message type"):
        decode('{"type":"blorp"}')


def test_missing_type_raises():
    with pytest.raises(ProtocolError, match="no 'type' field"):
        decode('{"name":"start"}')


def test_non_object_raises():
    with pytest.raises(ProtocolError, match="JSON object"):
        decode('[1,2,3]')


def test_missing_required_field_raises():
    with pytest.raises(ProtocolError, match="missing field 'inputKind'"):
        decode('{"type":"wimp","name":"start"}')


def test_wrong_field_type_raises():
    with pytest.raises(ProtocolError, match="wrong type"):
        decode('{"type":"warning","text":17}')


def test_bad_points_shape_raises():
    with pytest.raises(ProtocolError, match=r"\[x, y, t\]"):
        decode('{"type":"stroke","id":1,"points":[[1,2]]}')


def test_geometry_missing_field_raises():
    with pytest.raises(ProtocolError, match="gutterGeometry missing"):
        decode('{"type":"load","source":"","mode":"sketch",'
               '"gutterGeometry":{"xMin":0}}')


# --- stroke logs ----------------------------------------------------------


def _sample_log():
    header = Header(version=PROTOCOL_VERSION, program="variation1",
                    mode="sketch", gutter_geometry=GEO)
    msgs = [
        LoadProgram(source="x = 1\n", gutter_geometry=GEO, mode="sketch"),
        Stroke(id=1, points=(Point(20.0, 81.0, 0.0), Point(20.0, 82.0, 10.0))),
        WimpCommand(name="start", input_kind="keypress", t=500.0),
    ]
    return header, msgs


def test_log_round_trip():
    header, msgs = _sample_log()
    text = dump_log(header, msgs)
    assert text.endswith("\n")
    h2, m2 = parse_log(text)
    assert h2 == header
    assert m2 == msgs


def test_log_blank_lines_tolerated():
    header, msgs = _sample_log()
    text = dump_log(header, msgs).replace("\n", "\n\n")
    h2, m2 = parse_log(text)
    assert (h2, m2) == (header, msgs)


def test_empty_log_rejected():
    with pytest.raises(ProtocolError, match="empty log"):
        parse_log("   \n \n")


def test_log_requires_header_first():
    _, msgs = _sample_log()
    with pytest.raises(ProtocolError, match="start with a header"):
        parse_log(encode(msgs[0]) + "\n")


def test_log_version_checked():
    header, msgs = _sample_log()
    bad = Header(version=99, program=header.program, mode=header.mode,
                 gutter_geometry=header.gutter_geometry)
    with pytest.raises(ProtocolError, match="unsupported log version: 99"):
        parse_log(dump_log(bad, msgs))


def test_log_duplicate_header_rejected():
    header, msgs = _sample_log()
    text = dump_log(header, msgs) + encode(header) + "\n"
    with pytest.raises(ProtocolError, match="duplicate header"):
        parse_log(text)


def test_log_rejects_server_records():
    header, _ = _sample_log()
    text = dump_log(header, []) + encode(Warning("nope")) + "\n"
    with pytest.raises(ProtocolError, match="client messages"):
        parse_log(text)
