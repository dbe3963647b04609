"""Pen-gesture-controlled interactive debugger for a small Python subset.

The package is organized around a pre-executed program trace that a debug
session navigates. Input arrives either as timestamped pen strokes, which
gutter/spiral/symbolic recognizers turn into debugger commands, or as
conventional toolbar clicks and keyboard shortcuts. A JSON Lines protocol
connects the engine to a browser UI, a headless replay CLI, and a small
statistics toolkit for paired session measures.
"""

__version__ = "0.1.0"
