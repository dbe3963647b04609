"""End-to-end runs of the command-line tool."""

import json

import pytest

from sketchdbg.cli import main
from sketchdbg.protocol import decode
from sketchdbg.recognizer import load_templates, template_library
from test_service import scenario_log


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- trace -------------------------------------------------------------------


def test_trace_bundled_program(capsys):
    code, out, _ = run(capsys, "trace", "variation1")
    assert code == 0
    doc = json.loads(out)
    assert doc["outcome"]["status"] == "completed"
    assert doc["outcome"]["topValue"] == 50
    assert doc["events"][0]["kind"] == "call"     # module frame entry
    assert doc["events"][1]["kind"] == "line"
    assert doc["events"][-1]["kind"] == "end"


def test_trace_source_file(tmp_path, capsys):
    src = tmp_path / "p.py"
    src.write_text("x = 2\ny = x * 21\n")
    code, out, _ = run(capsys, "trace", str(src))
    assert code == 0
    doc = json.loads(out)
    assert doc["events"][-1]["locals"] == {"x": 2, "y": 42}


def test_trace_to_file(tmp_path, capsys):
    dest = tmp_path / "trace.json"
    code, out, _ = run(capsys, "trace", "variation2", "--out", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["outcome"]["topValue"] == 127


def test_trace_syntax_error(tmp_path, capsys):
    src = tmp_path / "bad.py"
    src.write_text("def f(:\n")
    code, _, err = run(capsys, "trace", str(src))
    assert code == 2 and "error:" in err


def test_trace_unknown_program(capsys):
    code, _, err = run(capsys, "trace", "variation9")
    assert code == 2
    assert "neither a bundled program" in err


def test_trace_event_cap(tmp_path, capsys):
    src = tmp_path / "spin.py"
    src.write_text("x = 0\nwhile x < 10000:\n    x = x + 1\n")
    code, out, _ = run(capsys, "trace", str(src), "--max-events", "500")
    assert code == 0
    assert json.loads(out)["outcome"]["status"] == "limitExceeded"


# --- replay ------------------------------------------------------------------


@pytest.fixture
def log_file(tmp_path):
    path = tmp_path / "walk.strokes"
    path.write_text(scenario_log())
    return path


def test_replay_report_and_transcript(tmp_path, log_file, capsys):
    report_path = tmp_path / "report.json"
    transcript_path = tmp_path / "server.jsonl"
    code, out, _ = run(capsys, "replay", "--log", str(log_file),
                       "--out", str(report_path),
                       "--transcript", str(transcript_path))
    assert code == 0 and out == ""
    report = json.loads(report_path.read_text())
    assert report["actions"] == 3
    assert report["finalPhase"] == "paused"
    lines = transcript_path.read_text().splitlines()
    assert len(lines) > 40
    for line in lines:
        decode(line)


def test_replay_runs_are_byte_identical(tmp_path, log_file, capsys):
    outputs = []
    for i in range(2):
        rep = tmp_path / f"r{i}.json"
        tr = tmp_path / f"t{i}.jsonl"
        assert main(["replay", "--log", str(log_file), "--out", str(rep),
                     "--transcript", str(tr)]) == 0
        outputs.append((rep.read_bytes(), tr.read_bytes()))
    assert outputs[0] == outputs[1]


def test_replay_program_override(tmp_path, log_file, capsys):
    code, out, _ = run(capsys, "replay", "--log", str(log_file),
                       "--program", "variation2")
    assert code == 0
    # variation2 has no line 5 loop; the same strokes do much less
    report = json.loads(out)
    assert report["actions"] == 3


def test_replay_slower_spiral_rate_drops_ticks(tmp_path, log_file, capsys):
    code, default_out, _ = run(capsys, "replay", "--log", str(log_file))
    assert code == 0
    base = len(json.loads(default_out)["pausedLineHistory"])
    code, slow_out, _ = run(capsys, "replay", "--log", str(log_file),
                            "--spiral-max-rate", "2.0")
    assert code == 0
    slow = len(json.loads(slow_out)["pausedLineHistory"])
    assert 2 < slow < base            # same log, half the step budget


def test_replay_bad_log(tmp_path, capsys):
    path = tmp_path / "junk.strokes"
    path.write_text("not json\n")
    code, _, err = run(capsys, "replay", "--log", str(path))
    assert code == 2 and "error:" in err


def test_replay_rejects_bad_config(tmp_path, log_file, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"dwellRadius": 5}')
    code, _, err = run(capsys, "replay", "--log", str(log_file),
                       "--config", str(cfg))
    assert code == 2 and "unknown config keys" in err


# --- analyze -----------------------------------------------------------------


PAIRS = "task,sketch,wimp\nwalk,3,22\nscan,5,14\nfix,4,9\nprobe,6,13\npeek,2,8\nchase,7,15\n"


@pytest.fixture
def pairs_file(tmp_path):
    path = tmp_path / "pairs.csv"
    path.write_text(PAIRS)
    return path


def test_analyze_outputs_stats_csv_and_figures(tmp_path, pairs_file, capsys):
    csv_out = tmp_path / "table.csv"
    fig_dir = tmp_path / "figs"
    code, out, err = run(capsys, "analyze", "--pairs", str(pairs_file),
                         "--boot", "2000", "--seed", "7",
                         "--csv", str(csv_out), "--fig", str(fig_dir))
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 6
    assert doc["wilcoxon"]["statistic"] == 0      # pen wins every task
    assert doc["wilcoxon"]["method"] == "exact"
    assert doc["savingCI"]["low"] > 0
    rows = csv_out.read_text().splitlines()
    assert rows[0] == "task,sketch,wimp,saving"
    assert rows[1] == "walk,3,22,19"
    pngs = sorted(p.name for p in fig_dir.iterdir())
    assert pngs == ["actions_per_task.png", "mean_saving_ci.png"]
    assert all((fig_dir / p).stat().st_size > 1000 for p in pngs)
    assert err.count("wrote") == 2


def test_analyze_is_seed_stable(pairs_file, capsys):
    a = run(capsys, "analyze", "--pairs", str(pairs_file), "--seed", "3")
    b = run(capsys, "analyze", "--pairs", str(pairs_file), "--seed", "3")
    assert a == b
    c = run(capsys, "analyze", "--pairs", str(pairs_file), "--seed", "4")
    assert a[1] != c[1]


def test_analyze_rejects_malformed_pairs(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("task,pen,mouse\nwalk,3,22\n")
    code, _, err = run(capsys, "analyze", "--pairs", str(path))
    assert code == 2 and "missing" in err


# --- templates ---------------------------------------------------------------


def test_templates_export_round_trips(tmp_path, capsys):
    dest = tmp_path / "templates.json"
    code, _, _ = run(capsys, "templates", "--out", str(dest))
    assert code == 0
    assert load_templates(dest) == template_library()
