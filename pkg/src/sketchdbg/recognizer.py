"""Symbolic gesture classification for the six debugger strokes.

A completed (or dwell-truncated) stroke is normalized and compared against
a small template library with a golden-section search over alignment
angles in [-45, +45] degrees. The window is deliberately narrow: full
rotation invariance would collapse the L / mirrored-L / caret distinctions.

Score convention: 1 - meanDistance / (half the reference-square diagonal),
clamped to [0, 1]; a stroke is accepted when the score reaches the
threshold (0.80 by default) and its bounding box is big enough to rule
out gutter taps and pen noise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .stroke import (
    XY,
    SQUARE_SIZE,
    Stroke,
    extent,
    normalize_points,
    path_distance,
    rotate_by,
)

GESTURE_KINDS = ("start", "stop", "continue", "stepInto", "stepOver", "stepOut")

#: Kinds that drive execution and may be repeated by a spiral.
FLOW_KINDS = frozenset({"continue", "stepInto", "stepOver", "stepOut"})

SCORE_THRESHOLD = 0.80
MIN_EXTENT = 10.0  # px; smaller strokes are taps/noise, never symbols

HALF_DIAGONAL = 0.5 * math.hypot(SQUARE_SIZE, SQUARE_SIZE)
ANGLE_RANGE_DEG = 45.0
ANGLE_PRECISION_DEG = 2.0
_PHI = 0.5 * (math.sqrt(5.0) - 1.0)

TEMPLATE_FILE_VERSION = 1


@dataclass(frozen=True)
class GestureTemplate:
    kind: str
    name: str
    points: tuple[XY, ...]      # canonical raw polyline
    normalized: tuple[XY, ...]  # cached normalization of `points`


@dataclass(frozen=True)
class RecognitionResult:
    kind: str | None
    score: float
    accepted: bool


def _screen_arc(cx: float, cy: float, r: float, deg_from: float,
                deg_to: float, step: float = 5.0) -> list[XY]:
    """Sample an arc using screen-intuitive angles (0 = east, 90 = up)."""
    n = max(1, round(abs(deg_to - deg_from) / step))
    out = []
    for i in range(n + 1):
        a = math.radians(deg_from + (deg_to - deg_from) * i / n)
        out.append((cx + r * math.cos(a), cy - r * math.sin(a)))
    return out


def _s_curve() -> list[XY]:
    # two stacked half-turns with opposite handedness
    top = _screen_arc(50, 30, 20, 90, 270)
    bottom = _screen_arc(50, 70, 20, 90, -90)
    return top + bottom[1:]


_CANONICAL_SHAPES: dict[str, list[XY]] = {
    "start": _s_curve(),
    "stop": [(10, 10), (90, 10), (90, 66), (10, 66), (10, 10)],
    "continue": [(10, 10), (10, 90), (80, 50), (10, 10)],
    "stepInto": [(20, 10), (20, 80), (70, 80)],
    "stepOver": [(10, 70), (45, 10), (80, 70)],
    "stepOut": [(80, 10), (80, 80), (30, 80)],
}


def _make_template(kind: str, name: str, points: Sequence[XY]) -> GestureTemplate:
    return GestureTemplate(
        kind=kind,
        name=name,
        points=tuple((float(x), float(y)) for x, y in points),
        normalized=tuple(normalize_points(points)),
    )


def template_library() -> list[GestureTemplate]:
    """Procedurally generated canonical templates, one per gesture kind."""
    return [
        _make_template(kind, kind, pts)
        for kind, pts in _CANONICAL_SHAPES.items()
    ]


def save_templates(templates: Sequence[GestureTemplate], path: str | Path) -> None:
    doc = {
        "version": TEMPLATE_FILE_VERSION,
        "templates": [
            {"kind": t.kind, "name": t.name,
             "points": [[x, y] for x, y in t.points]}
            for t in templates
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_templates(path: str | Path) -> list[GestureTemplate]:
    doc = json.loads(Path(path).read_text())
    if doc.get("version") != TEMPLATE_FILE_VERSION:
        raise ValueError(f"unsupported template file version: {doc.get('version')!r}")
    out = []
    for entry in doc["templates"]:
        kind = entry["kind"]
        if kind not in GESTURE_KINDS:
            raise ValueError(f"unknown gesture kind in template file: {kind!r}")
        pts = entry["points"]
        if len(pts) < 2:
            raise ValueError(f"template {entry.get('name', kind)!r} has < 2 points")
        out.append(_make_template(kind, entry.get("name", kind), pts))
    if not out:
        raise ValueError("template file contains no templates")
    return out


def bundled_template_path() -> Path:
    return Path(__file__).parent / "assets" / "templates.json"


def _distance_at_angle(points: Sequence[XY], template: Sequence[XY],
                       deg: float) -> float:
    return path_distance(rotate_by(points, math.radians(deg)), template)


def distance_at_best_angle(points: Sequence[XY], template: Sequence[XY],
                           a_deg: float = -ANGLE_RANGE_DEG,
                           b_deg: float = ANGLE_RANGE_DEG,
                           precision_deg: float = ANGLE_PRECISION_DEG) -> float:
    """Golden-section search for the alignment angle minimizing distance.

    0 degrees is probed explicitly as well, so exact template self-matches
    keep a distance of exactly 0 (the search rarely lands on 0 itself).
    """
    a, b = a_deg, b_deg
    x1 = _PHI * a + (1.0 - _PHI) * b
    f1 = _distance_at_angle(points, template, x1)
    x2 = (1.0 - _PHI) * a + _PHI * b
    f2 = _distance_at_angle(points, template, x2)
    while abs(b - a) > precision_deg:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = _PHI * a + (1.0 - _PHI) * b
            f1 = _distance_at_angle(points, template, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = (1.0 - _PHI) * a + _PHI * b
            f2 = _distance_at_angle(points, template, x2)
    return min(f1, f2, _distance_at_angle(points, template, 0.0))


def recognize(stroke: Stroke | Sequence[XY],
              library: Sequence[GestureTemplate],
              threshold: float = SCORE_THRESHOLD,
              min_extent: float = MIN_EXTENT) -> RecognitionResult:
    """Classify a stroke against the library; ties keep the earlier template."""
    xys = stroke.xys() if isinstance(stroke, Stroke) else list(stroke)
    if len(xys) < 2 or extent(xys) < min_extent:
        return RecognitionResult(kind=None, score=0.0, accepted=False)

    candidate = normalize_points(xys)
    best_d = math.inf
    best_kind: str | None = None
    for template in library:
        d = distance_at_best_angle(candidate, template.normalized)
        if d < best_d:
            best_d = d
            best_kind = template.kind

    score = max(0.0, 1.0 - best_d / HALF_DIAGONAL)
    return RecognitionResult(kind=best_kind, score=score,
                             accepted=score >= threshold)
