"""Dwell detection and clockwise-spiral repetition for one in-flight stroke.

The controller watches a stroke's points as they stream in. Holding the
pen nearly still for the dwell duration freezes the prefix drawn so far
as the base gesture; if the caller confirms it as an execution-flow kind,
the controller enters the spinning phase and converts clockwise turning
(positive cross product under y-down coordinates) into step ticks: one
per 180 degrees of accrued turn, capped at four per second. Withheld
ticks are discarded rather than queued, so stopping the pen stops the
program immediately.

All timing comes from point timestamps, never the wall clock, which makes
live serving and log replay behave identically.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from operator import attrgetter

from .stroke import Point

BASE_DRAWING = "baseDrawing"
DWELLING = "dwelling"
SPINNING = "spinning"
DEAD = "dead"


@dataclass(frozen=True)
class SpiralParams:
    dwell_radius: float = 10.0        # px
    dwell_ms: float = 300.0
    degrees_per_step: float = 180.0
    max_steps_per_second: float = 4.0
    pause_window_ms: float = 150.0

    def __post_init__(self):
        for name in ("dwell_radius", "dwell_ms", "degrees_per_step",
                     "max_steps_per_second", "pause_window_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def min_tick_interval_ms(self) -> float:
        return 1000.0 / self.max_steps_per_second


@dataclass(frozen=True)
class FeedResult:
    ticks: int = 0
    dwell_detected: bool = False


def _still(points: list[Point], now: float, window_ms: float,
           radius: float) -> Point | None:
    """First point of the trailing window if every point stayed within
    `radius` of it, else None."""
    start = now - window_ms
    i = bisect_left(points, start, key=attrgetter("t"))
    if i == len(points):
        return None
    anchor = points[i]
    for p in points[i + 1:]:
        if math.dist(p.xy(), anchor.xy()) > radius:
            return None
    return anchor


@dataclass
class SpiralController:
    params: SpiralParams = field(default_factory=SpiralParams)

    mode: str = BASE_DRAWING
    dwell_anchor: Point | None = None
    dwell_start: float = 0.0
    accumulated_deg: float = 0.0
    steps_emitted: int = 0
    last_step_at: float = -math.inf
    base_kind: str | None = None

    _points: list[Point] = field(default_factory=list)
    _armed: bool = False
    _suppress_anchor: Point | None = None
    _prev_pos: Point | None = None
    _prev_heading: tuple[float, float] | None = None

    # --- lifecycle -------------------------------------------------------

    def feed_point(self, p: Point) -> FeedResult:
        if self._points and p.t < self._points[-1].t:
            raise ValueError(
                f"point timestamps must be non-decreasing "
                f"({p.t} after {self._points[-1].t})")
        self._points.append(p)

        if self.mode == BASE_DRAWING:
            return self._feed_base(p)
        if self.mode == SPINNING:
            return FeedResult(ticks=self._feed_spinning(p))
        return FeedResult()

    def _feed_base(self, p: Point) -> FeedResult:
        if self._suppress_anchor is not None:
            if math.dist(p.xy(), self._suppress_anchor.xy()) \
                    <= self.params.dwell_radius:
                return FeedResult()
            self._suppress_anchor = None
        if p.t - self._points[0].t < self.params.dwell_ms:
            return FeedResult()
        anchor = _still(self._points, p.t, self.params.dwell_ms,
                        self.params.dwell_radius)
        if anchor is None:
            return FeedResult()
        self.mode = DWELLING
        self.dwell_anchor = anchor
        self.dwell_start = anchor.t
        return FeedResult(dwell_detected=True)

    def confirm_base(self, kind: str | None) -> None:
        """Resolve the dwell: a flow kind starts spinning, anything else
        (rejected, gutter, non-flow) quietly resumes base drawing."""
        if self.mode != DWELLING:
            raise ValueError(f"confirm_base in mode {self.mode!r}")
        if kind is None:
            self.mode = BASE_DRAWING
            # no second dwell until the pen leaves the spot it idled on
            self._suppress_anchor = self._points[-1]
            self.dwell_anchor = None
            return
        self.mode = SPINNING
        self.base_kind = kind
        self.accumulated_deg = 0.0
        self._armed = False
        # rate cap spaces *ticks*; the base command itself is not a tick
        self.last_step_at = -math.inf
        self._prev_pos = self._points[-1]
        self._prev_heading = None

    def finish(self) -> None:
        self.mode = DEAD

    # --- spinning --------------------------------------------------------

    def _feed_spinning(self, p: Point) -> int:
        assert self.dwell_anchor is not None and self._prev_pos is not None
        if not self._armed and math.dist(p.xy(), self.dwell_anchor.xy()) \
                > self.params.dwell_radius:
            self._armed = True

        dx = p.x - self._prev_pos.x
        dy = p.y - self._prev_pos.y
        if dx == 0.0 and dy == 0.0:
            return self._maybe_tick(p.t)
        heading = (dx, dy)
        if self._prev_heading is not None:
            hx, hy = self._prev_heading
            cross = hx * dy - hy * dx   # > 0 = clockwise on screen (y down)
            dot = hx * dx + hy * dy
            turn = math.degrees(math.atan2(cross, dot))
            if turn > 0.0:
                self.accumulated_deg += turn
        self._prev_heading = heading
        self._prev_pos = p
        return self._maybe_tick(p.t)

    def _maybe_tick(self, now: float) -> int:
        if not self._armed:
            return 0
        # 1e-6 deg of slack so a half-turn built from many small segments
        # isn't lost to float rounding right at the threshold
        if self.accumulated_deg < self.params.degrees_per_step - 1e-6:
            return 0
        if now - self.last_step_at < self.params.min_tick_interval_ms:
            return 0
        if _still(self._points, now, self.params.pause_window_ms,
                  self.params.dwell_radius) is not None:
            # pen is pausing: drop the accrued angle so resuming motion
            # never releases a stale tick
            self.accumulated_deg = 0.0
            return 0
        self.steps_emitted += 1
        self.last_step_at = now
        self.accumulated_deg = 0.0  # surplus and withheld ticks discarded
        return 1

    # --- queries ---------------------------------------------------------

    def prefix_points(self) -> list[Point]:
        """Points drawn before the dwell began (the base gesture)."""
        return [p for p in self._points if p.t <= self.dwell_start]
