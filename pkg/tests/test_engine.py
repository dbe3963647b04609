"""Trace-recording interpreter, checked against the stock line tracer."""

import json
import time

import pytest

from sketchdbg import corpus
from sketchdbg.engine import (
    FunctionRef,
    Limits,
    locals_at,
    trace_program,
    trace_to_json,
)

from oracle import cpython_trace, line_events


def int_bool_subset(mapping):
    return {k: v for k, v in mapping.items()
            if isinstance(v, bool) or type(v) is int}


def my_line_events(trace):
    return [e for e in trace.events if e.kind == "line"]


# --- oracle equivalence -------------------------------------------------------

@pytest.mark.parametrize("name", ["variation1", "variation2"])
def test_line_depth_sequence_matches_reference(name):
    src = corpus.load(name)
    started = time.monotonic()
    trace = trace_program(src)
    assert time.monotonic() - started < 1.0
    want = [(line, depth) for line, depth, _ in line_events(src)]
    got = [(e.line, e.depth) for e in my_line_events(trace)]
    assert got == want


@pytest.mark.parametrize("name", ["variation1", "variation2"])
def test_locals_match_reference_at_every_line_event(name):
    src = corpus.load(name)
    trace = trace_program(src)
    oracle = line_events(src)
    mine = my_line_events(trace)
    assert len(mine) == len(oracle)
    for event, (_, _, want_locals) in zip(mine, oracle):
        assert int_bool_subset(event.locals) == want_locals


@pytest.mark.parametrize("name", ["variation1", "variation2"])
def test_call_return_events_match_reference(name):
    # the reference's final module-frame return corresponds to our End
    src = corpus.load(name)
    trace = trace_program(src)
    ref = cpython_trace(src)
    assert ref[-1][0] == "return" and ref[-1][2] == 0
    want = [(k, line, depth) for k, line, depth, _, _ in ref[:-1]]
    got = [(e.kind, e.line, e.depth) for e in trace.events[:-1]]
    assert got == want
    end = trace.events[-1]
    assert (end.kind, end.line, end.depth) == ("end", ref[-1][1], 0)


def test_return_values_match_reference():
    src = corpus.load("variation1")
    trace = trace_program(src)
    want = [(line, depth, value)
            for k, line, depth, _, value in cpython_trace(src)
            if k == "return" and depth > 0]
    got = [(e.line, e.depth, e.return_value)
           for e in trace.events if e.kind == "return"]
    assert got == want


# --- documented corpus values ---------------------------------------------------

def test_variation1_final_value_and_overwrites():
    trace = trace_program(corpus.load("variation1"))
    assert trace.outcome.status == "completed"
    assert trace.outcome.top_value == 50
    # `total` is overwritten each iteration: at the breakpoint line with
    # i = k, total still holds 2*(k-1) from the previous pass
    at_line5 = [e for e in my_line_events(trace) if e.line == 5]
    by_i = {e.locals["i"]: e.locals["total"] for e in at_line5}
    assert by_i[1] == 0
    assert by_i[2] == 2
    assert by_i[9] == 16
    assert by_i[13] == 24  # becomes 26 only after line 5 runs with i=13
    at_line6 = [e for e in my_line_events(trace) if e.line == 6]
    post = {e.locals["i"]: e.locals["total"] for e in at_line6}
    assert post[13] == 26
    assert post[22] == 44


def test_variation2_value_sequence():
    trace = trace_program(corpus.load("variation2"))
    assert trace.outcome.status == "completed"
    assert trace.outcome.top_value == 127
    at_loop = [e for e in my_line_events(trace) if e.line == 3]
    seen = [e.locals["value"] for e in at_loop]
    assert seen == [1, 3, 7, 15, 31, 63, 127]


def test_end_event_unique_and_last():
    trace = trace_program(corpus.load("variation1"))
    ends = [e for e in trace.events if e.kind == "end"]
    assert len(ends) == 1
    assert trace.events[-1].kind == "end"
    assert [e.index for e in trace.events] == list(range(len(trace.events)))


# --- locals_at ------------------------------------------------------------------

def test_locals_at_index0_is_empty_module_frame():
    trace = trace_program(corpus.load("variation1"))
    locs, stack = locals_at(trace, 0)
    assert locs == {}
    assert stack[-1].function == "<module>"


def test_locals_at_first_add_body_line():
    src = corpus.load("variation1")
    trace = trace_program(src)
    # first line event inside add: parameters already bound
    inside = next(e for e in trace.events
                  if e.kind == "line" and e.line == 10)
    locs, stack = locals_at(trace, inside.index)
    assert locs == {"a": 1, "b": 1}
    assert [f.function for f in stack] == ["<module>", "accumulate", "add"]


def test_locals_at_end_has_function_bindings():
    trace = trace_program(corpus.load("variation1"))
    locs, _ = locals_at(trace, len(trace.events) - 1)
    assert isinstance(locs["accumulate"], FunctionRef)
    assert isinstance(locs["add"], FunctionRef)
    assert isinstance(locs["identity"], FunctionRef)


def test_locals_at_rejects_bad_index():
    trace = trace_program(corpus.load("variation1"))
    with pytest.raises(IndexError):
        locals_at(trace, len(trace.events))


def test_snapshots_are_immutable_copies():
    trace = trace_program(corpus.load("variation1"))
    locs, _ = locals_at(trace, 5)
    locs["injected"] = 99
    again, _ = locals_at(trace, 5)
    assert "injected" not in again


# --- semantics edges -------------------------------------------------------------

def test_argument_evaluation_order_left_to_right():
    src = (
        "def f(a, b):\n"
        "    return a + b\n"
        "def g(x):\n"
        "    return x * 10\n"
        "f(1, g(2))\n"
    )
    trace = trace_program(src)
    calls = [e for e in trace.events if e.kind == "call"]
    assert [trace_fn(e) for e in calls] == ["<module>", "g", "f"]


def trace_fn(event):
    return event.stack[-1].function


def test_console_output_via_print():
    src = "x = 41\nprint(x + 1)\nprint(1 < 2)\n"
    trace = trace_program(src)
    assert trace.console_text() == "42\nTrue\n"
    # output of line 2 lands on the event AFTER it (state before a line
    # never includes that line's effects)
    line2 = next(e for e in trace.events if e.kind == "line" and e.line == 2)
    assert trace.console_text(line2.index) == ""


def test_print_is_shadowable():
    src = (
        "def print(x):\n"
        "    return x\n"
        "print(5)\n"
    )
    trace = trace_program(src)
    assert trace.outcome.status == "completed"
    assert trace.console_text() == ""
    assert trace.outcome.top_value == 5


@pytest.mark.parametrize("src,fragment", [
    ("x = y + 1\n", "not defined"),
    ("def f(a):\n    return a\nf(1, 2)\n", "takes 1 arguments"),
    ("x = 5\nx(1)\n", "not callable"),
    ("x = 9223372036854775807 + 1\n", "overflow"),
    ("x = 1 // 0\n", "division by zero"),
    ("x = 5 % 0\n", "modulo by zero"),
    ("def f():\n    return f()\nf()\n", "depth limit"),
])
def test_runtime_errors(src, fragment):
    trace = trace_program(src)
    assert trace.outcome.status == "runtimeError"
    assert fragment in trace.outcome.error
    assert trace.outcome.error_line > 0


def test_infinite_loop_hits_event_limit():
    trace = trace_program("while 1 == 1:\n    x = 1\n",
                          limits=Limits(max_events=100))
    assert trace.outcome.status == "limitExceeded"
    assert "infinite loop" in trace.outcome.error
    assert len(trace.events) == 100


def test_depth_changes_by_at_most_one():
    for name in corpus.PROGRAMS:
        trace = trace_program(corpus.load(name))
        prev = trace.events[0].depth
        for event in trace.events[1:]:
            assert abs(event.depth - prev) <= 1
            prev = event.depth


def test_trace_determinism_byte_identical():
    src = corpus.load("variation2")
    a = trace_to_json(trace_program(src))
    b = trace_to_json(trace_program(src))
    assert a == b
    doc = json.loads(a)
    assert doc["outcome"]["status"] == "completed"
    assert doc["outcome"]["topValue"] == 127
