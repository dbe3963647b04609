"""Breakpoint edits from strokes over the line-number gutter.

A stroke belongs to the gutter when at least 80% of its points fall in
the gutter's x band. Its vertical extent maps to an inclusive line range:
a single-line mark toggles (snapping to an executable line within one row
when needed), a multi-line mark is strictly a clearing sweep.
"""

from __future__ import annotations

import builtins
import math
from dataclasses import dataclass, field
from typing import Sequence

from .stroke import XY

GUTTER_CONTAINMENT = 0.80


@dataclass(frozen=True)
class GutterGeometry:
    x_min: float
    x_max: float
    line_height: float
    top_offset: float
    first_line: int = 1
    line_count: int = 1

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ValueError("gutter band must have x_min < x_max")
        if self.line_height <= 0:
            raise ValueError("line height must be positive")

    @property
    def last_line(self) -> int:
        return self.first_line + self.line_count - 1


@dataclass
class BreakpointUpdate:
    # the field name `set` shadows the builtin inside this class body,
    # hence the explicit builtins references
    set: builtins.set[int] = field(default_factory=builtins.set)
    cleared: builtins.set[int] = field(default_factory=builtins.set)
    warning: str | None = None

    @property
    def changed(self) -> bool:
        return bool(self.set or self.cleared)


def is_gutter_stroke(points: Sequence[XY], geometry: GutterGeometry,
                     containment: float = GUTTER_CONTAINMENT) -> bool:
    if not points:
        return False
    inside = sum(1 for x, _ in points if geometry.x_min <= x <= geometry.x_max)
    return inside >= containment * len(points)


def lines_spanned(points: Sequence[XY],
                  geometry: GutterGeometry) -> tuple[int, int]:
    """Inclusive line range under the stroke's vertical extent, clamped."""
    ys = [y for _, y in points]
    y_min, y_max = min(ys), max(ys)
    lo = geometry.first_line + math.floor(
        (y_min - geometry.top_offset) / geometry.line_height)
    # ceil-1 so a stroke ending exactly on a row boundary stays in that row
    hi = geometry.first_line + math.ceil(
        (y_max - geometry.top_offset) / geometry.line_height) - 1
    hi = max(hi, lo)
    lo = min(max(lo, geometry.first_line), geometry.last_line)
    hi = min(max(hi, geometry.first_line), geometry.last_line)
    return lo, hi


def _snap_to_executable(line: int, executable: set[int]) -> int | None:
    # nearest executable row within one line; below wins a tie because a
    # mark's ink tends to sag under the intended row
    for candidate in (line, line + 1, line - 1):
        if candidate in executable:
            return candidate
    return None


def apply_gutter_mark(line_range: tuple[int, int], breakpoints: set[int],
                      executable: set[int]) -> BreakpointUpdate:
    """Toggle (single line) or sweep-clear (multi line); never mutates input."""
    lo, hi = line_range
    if lo > hi:
        raise ValueError(f"empty line range: {line_range}")

    if lo == hi:
        target = _snap_to_executable(lo, executable)
        if target is None:
            return BreakpointUpdate(
                warning=f"no executable line near line {lo}")
        if target in breakpoints:
            return BreakpointUpdate(cleared={target})
        return BreakpointUpdate(set={target})

    swept = {line for line in breakpoints if lo <= line <= hi}
    if not swept:
        return BreakpointUpdate(
            warning=f"no breakpoints between lines {lo} and {hi}")
    return BreakpointUpdate(cleared=swept)
