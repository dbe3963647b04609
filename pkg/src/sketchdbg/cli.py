"""Command-line entry point.

    sketchdbg serve    run the WebSocket debug service
    sketchdbg trace    pre-execute a program, dump its event trace as JSON
    sketchdbg replay   run a recorded stroke log, print the session report
    sketchdbg analyze  paired action counts -> stats, CSV, figures
    sketchdbg templates  export the gesture template set
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus
from .config import Config, load_config
from .engine import ExecError, trace_program, trace_to_json
from .lang import LangSyntaxError
from .protocol import ProtocolError
from .recognizer import load_templates, save_templates, template_library
from .report import (
    analysis_json,
    analyze_pairs,
    read_pairs_csv,
    render_figures,
    write_pairs_csv,
)
from .service import replay, serve

DEFAULT_PORT = 8765


def _resolve_program(spec: str) -> str:
    """A program is a bundled corpus name or a path to a source file."""
    if spec in corpus.PROGRAMS:
        return corpus.load(spec)
    path = Path(spec)
    if path.exists():
        return path.read_text()
    raise ValueError(
        f"{spec!r} is neither a bundled program "
        f"({', '.join(corpus.PROGRAMS)}) nor a file")


def _load_config(args: argparse.Namespace) -> Config:
    cfg = load_config(args.config) if args.config else Config()
    overrides = {}
    if args.spiral_degrees_per_step is not None:
        overrides["degrees_per_step"] = args.spiral_degrees_per_step
    if args.spiral_max_rate is not None:
        overrides["max_steps_per_second"] = args.spiral_max_rate
    if overrides:
        import dataclasses

        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def _load_templates(args: argparse.Namespace):
    return load_templates(args.templates) if args.templates else None


def _write_out(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _add_tuning_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="JSON",
                   help="tunables file (see config.Config for keys)")
    p.add_argument("--templates", metavar="JSON",
                   help="gesture template set to use instead of the bundled one")
    p.add_argument("--spiral-degrees-per-step", type=float, default=None,
                   metavar="DEG", help="rotation per spiral step (default 180)")
    p.add_argument("--spiral-max-rate", type=float, default=None,
                   metavar="HZ", help="spiral step rate cap (default 4/s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sketchdbg",
        description="pen-gesture debugger: service, trace oracle, "
                    "log replay, and study analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the WebSocket service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("SKETCHDBG_PORT", DEFAULT_PORT)))
    _add_tuning_flags(p)

    p = sub.add_parser("trace", help="dump a program's execution trace")
    p.add_argument("program", help="bundled program name or source path")
    p.add_argument("--max-events", type=int, default=None)
    p.add_argument("--out", default="-", metavar="PATH")

    p = sub.add_parser("replay", help="replay a recorded stroke log")
    p.add_argument("--log", required=True, metavar="PATH")
    p.add_argument("--program", default=None,
                   help="override the program the log names")
    p.add_argument("--out", default="-", metavar="PATH",
                   help="session report JSON (default stdout)")
    p.add_argument("--transcript", default=None, metavar="PATH",
                   help="also write every server message, one per line")
    _add_tuning_flags(p)

    p = sub.add_parser("analyze", help="analyze paired action counts")
    p.add_argument("--pairs", required=True, metavar="CSV",
                   help="rows of task,sketch,wimp")
    p.add_argument("--boot", type=int, default=10_000, metavar="B")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None, metavar="PATH",
                   help="write the table (with savings) back out")
    p.add_argument("--fig", default=None, metavar="DIR",
                   help="render figures into this directory")
    p.add_argument("--out", default="-", metavar="PATH",
                   help="analysis JSON (default stdout)")

    p = sub.add_parser("templates", help="export gesture templates")
    p.add_argument("--out", required=True, metavar="PATH")

    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    serve(host=args.host, port=args.port, config=_load_config(args),
          templates=_load_templates(args))
    return 0


def _cmd_trace(args: argparse.Namespace) -> int:
    source = _resolve_program(args.program)
    cfg = Config() if args.max_events is None \
        else Config(max_events=args.max_events)
    trace = trace_program(source, limits=cfg.limits())
    _write_out(args.out, trace_to_json(trace))
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    log_text = Path(args.log).read_text()
    source = _resolve_program(args.program) if args.program else None
    result = replay(log_text, source, config=_load_config(args),
                    templates=_load_templates(args))
    _write_out(args.out, result.report_json())
    if args.transcript:
        Path(args.transcript).write_text(result.transcript())
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    rows = read_pairs_csv(args.pairs)
    analysis = analyze_pairs(rows, b=args.boot, alpha=args.alpha,
                             seed=args.seed)
    _write_out(args.out, analysis_json(analysis))
    if args.csv:
        write_pairs_csv(args.csv, rows)
    if args.fig:
        for path in render_figures(args.fig, rows, analysis):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_templates(args: argparse.Namespace) -> int:
    save_templates(template_library(), args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "trace": _cmd_trace,
        "replay": _cmd_replay,
        "analyze": _cmd_analyze,
        "templates": _cmd_templates,
    }
    try:
        return handlers[args.command](args)
    except (ProtocolError, LangSyntaxError, ExecError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
