"""Stroke data model and geometric normalization primitives.

Coordinates are editor pixels with y growing downward (screen space).
Angles returned by :func:`indicative_angle` and accepted by
:func:`rotate_by` are measured in the screen-intuitive sense: 0 points
east and +pi/2 points up (toward smaller y), so positive angles rotate
counterclockwise as seen on screen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

XY = tuple[float, float]

#: Resample count and reference square used by the normalization chain.
RESAMPLE_N = 64
SQUARE_SIZE = 250.0


@dataclass(frozen=True)
class Point:
    """A single sampled pen/mouse position: pixels plus milliseconds."""

    x: float
    y: float
    t: float

    def xy(self) -> XY:
        return (self.x, self.y)


@dataclass
class Stroke:
    """One pen-down..pen-up trajectory."""

    id: int
    pointer: str  # "pen" | "mouse"
    points: list[Point] = field(default_factory=list)

    def xys(self) -> list[XY]:
        return [(p.x, p.y) for p in self.points]


@dataclass(frozen=True)
class NormalizedStroke:
    """Output of the normalization chain: exactly RESAMPLE_N points,
    centroid at the origin, bounding box scaled to the reference square."""

    points: tuple[XY, ...]
    source_id: int


def _as_xys(stroke_or_points) -> list[XY]:
    if isinstance(stroke_or_points, Stroke):
        return stroke_or_points.xys()
    return [(float(x), float(y)) for x, y in stroke_or_points]


def path_length(points: Sequence[XY]) -> float:
    """Total polyline arc length."""
    return sum(
        math.dist(points[i - 1], points[i]) for i in range(1, len(points))
    )


def resample(stroke_or_points, n: int) -> list[XY]:
    """Resample a polyline to exactly ``n`` points equally spaced by arc length.

    First and last points are preserved. A single-point (or zero-length)
    stroke degenerates to ``n`` copies of that point.
    """
    points = _as_xys(stroke_or_points)
    if not points:
        raise ValueError("cannot resample an empty stroke")
    if n < 2:
        raise ValueError("resample count must be >= 2")

    # Cumulative arc length, then direct inversion per target distance.
    # This avoids the incremental-walk drift of the textbook version and
    # keeps inter-point spacing uniform to float precision.
    cum = [0.0]
    for i in range(1, len(points)):
        cum.append(cum[-1] + math.dist(points[i - 1], points[i]))
    total = cum[-1]
    if total == 0.0:
        return [points[0]] * n

    out: list[XY] = [points[0]]
    seg = 1
    for k in range(1, n - 1):
        target = total * k / (n - 1)
        while cum[seg] < target:
            seg += 1
        seg_len = cum[seg] - cum[seg - 1]
        frac = 0.0 if seg_len == 0.0 else (target - cum[seg - 1]) / seg_len
        ax, ay = points[seg - 1]
        bx, by = points[seg]
        out.append((ax + (bx - ax) * frac, ay + (by - ay) * frac))
    out.append(points[-1])
    return out


def centroid(points: Sequence[XY]) -> XY:
    """Component-wise mean of a non-empty point list."""
    if not points:
        raise ValueError("centroid of empty point list")
    n = len(points)
    return (sum(p[0] for p in points) / n, sum(p[1] for p in points) / n)


def indicative_angle(points: Sequence[XY]) -> float:
    """Angle from the centroid to the first point, in (-pi, pi].

    Returned in the screen-intuitive convention (up is +pi/2); 0 for a
    degenerate stroke whose points all coincide.
    """
    cx, cy = centroid(points)
    x0, y0 = points[0]
    if x0 == cx and y0 == cy:
        return 0.0
    return math.atan2(cy - y0, x0 - cx)


def rotate_by(points: Sequence[XY], theta: float) -> list[XY]:
    """Rigid rotation about the centroid by ``theta`` (screen-CCW positive)."""
    cx, cy = centroid(points)
    cos, sin = math.cos(theta), math.sin(theta)
    return [
        (cx + (x - cx) * cos + (y - cy) * sin,
         cy - (x - cx) * sin + (y - cy) * cos)
        for x, y in points
    ]


def bounding_box(points: Sequence[XY]) -> tuple[float, float, float, float]:
    """(min_x, min_y, width, height) of the point list."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


def extent(points: Sequence[XY]) -> float:
    """Bounding-box diagonal; 0 for a single repeated point."""
    _, _, w, h = bounding_box(points)
    return math.hypot(w, h)


def scale_to_square(points: Sequence[XY], size: float) -> list[XY]:
    """Non-uniform scale of the bounding box to ``size`` x ``size``.

    A zero-width or zero-height box (straight strokes) is treated as
    1 px wide/tall so the scale stays finite.
    """
    _, _, w, h = bounding_box(points)
    w = w if w > 0 else 1.0
    h = h if h > 0 else 1.0
    return [(x * size / w, y * size / h) for x, y in points]


def translate_to_origin(points: Sequence[XY]) -> list[XY]:
    """Translate so the centroid lands on (0, 0)."""
    cx, cy = centroid(points)
    return [(x - cx, y - cy) for x, y in points]


def path_distance(a: Sequence[XY], b: Sequence[XY]) -> float:
    """Mean pairwise Euclidean distance between two equal-length lists."""
    if len(a) != len(b):
        raise ValueError(f"point list length mismatch: {len(a)} != {len(b)}")
    return sum(math.dist(p, q) for p, q in zip(a, b)) / len(a)


def normalize_points(points: Sequence[XY],
                     n: int = RESAMPLE_N,
                     size: float = SQUARE_SIZE) -> list[XY]:
    """Full normalization chain: resample, rotate the indicative angle to
    zero, scale to the reference square, translate centroid to origin."""
    pts = resample(points, n)
    pts = rotate_by(pts, -indicative_angle(pts))
    pts = scale_to_square(pts, size)
    return translate_to_origin(pts)


def normalize(stroke: Stroke,
              n: int = RESAMPLE_N,
              size: float = SQUARE_SIZE) -> NormalizedStroke:
    return NormalizedStroke(
        points=tuple(normalize_points(stroke.xys(), n, size)),
        source_id=stroke.id,
    )


def stroke_from_xys(xys: Iterable[XY], stroke_id: int = 0,
                    pointer: str = "pen", t0: float = 0.0,
                    dt: float = 10.0) -> Stroke:
    """Build a Stroke from bare coordinates with synthetic timestamps."""
    pts = [Point(x, y, t0 + i * dt) for i, (x, y) in enumerate(xys)]
    return Stroke(id=stroke_id, pointer=pointer, points=pts)
