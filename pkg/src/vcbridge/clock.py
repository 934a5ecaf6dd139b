"""Injectable time source. Every TTL decision in the system goes through a
Clock instance so tests can drive expiry deterministically."""

from __future__ import annotations

import time


class Clock:
    """Wall-clock time in epoch seconds."""

    def now(self) -> float:
        return time.time()


class ManualClock(Clock):
    """Fixed clock advanced explicitly by tests and demos."""

    def __init__(self, start: float = 1_700_000_000.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        self._now += seconds
        return self._now

    def set(self, epoch: float) -> None:
        self._now = float(epoch)
