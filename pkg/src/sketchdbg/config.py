"""Runtime tunables, loadable from a JSON file.

Every knob that affects recognition or spiral pacing lives here so a
deployment can retune without code changes.  Unknown keys are rejected
rather than ignored — a silently misspelled knob is worse than an error.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .engine import Limits
from .recognizer import MIN_EXTENT, SCORE_THRESHOLD
from .spiral import SpiralParams


@dataclass(frozen=True)
class Config:
    score_threshold: float = SCORE_THRESHOLD
    min_extent: float = MIN_EXTENT
    dwell_radius: float = 10.0
    dwell_ms: float = 300.0
    degrees_per_step: float = 180.0
    max_steps_per_second: float = 4.0
    pause_window_ms: float = 150.0
    max_events: int = 100_000

    def __post_init__(self) -> None:
        if not 0.0 < self.score_threshold <= 1.0:
            raise ValueError(
                f"score_threshold out of range: {self.score_threshold}")
        if self.min_extent < 0:
            raise ValueError(f"min_extent negative: {self.min_extent}")
        if self.max_events <= 0:
            raise ValueError(f"max_events must be positive: {self.max_events}")
        self.spiral_params()            # delegate the rest of the checks

    def spiral_params(self) -> SpiralParams:
        return SpiralParams(
            dwell_radius=self.dwell_radius,
            dwell_ms=self.dwell_ms,
            degrees_per_step=self.degrees_per_step,
            max_steps_per_second=self.max_steps_per_second,
            pause_window_ms=self.pause_window_ms)

    def limits(self) -> Limits:
        return Limits(max_events=self.max_events)


_FIELDS = {f.name for f in dataclasses.fields(Config)}


def config_from_dict(obj: dict) -> Config:
    if not isinstance(obj, dict):
        raise ValueError("config must be a JSON object")
    unknown = set(obj) - _FIELDS
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return Config(**obj)


def load_config(path: str | Path) -> Config:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"bad config JSON: {e.msg} at position {e.pos}")
    return config_from_dict(obj)
