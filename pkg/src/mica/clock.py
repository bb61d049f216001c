"""Session clocks.

All time inside the engine is a float of seconds since session start.
Tests and the harness drive a manually-advanced clock; live serving uses
the wall clock. Nothing in the engine reads time.time() directly.
"""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float: ...


class SimulatedClock:
    """Manually advanced clock for deterministic runs."""

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        if seconds < 0:
            raise ValueError("clock cannot move backwards")
        self._now += seconds
        return self._now

    def set(self, t: float) -> None:
        if t < self._now:
            raise ValueError("clock cannot move backwards")
        self._now = float(t)


class WallClock:
    """Wall-clock seconds relative to construction time."""

    def __init__(self):
        self._epoch = time.monotonic()

    def now(self) -> float:
        return time.monotonic() - self._epoch
