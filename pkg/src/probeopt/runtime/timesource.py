"""Sleep policies and pluggable time sources.

``RealTime`` is the normal mode: sleeps are wall-clock. ``VirtualClock``
replaces wall-clock sleeps with a shared logical clock so a free-running
multi-threaded run becomes reproducible: every participant owns a local
time, and only the participant holding the strict (time, name) minimum may
act. Sleeping advances local time and yields the floor. Threads, channels
and probes stay real; only the interleaving of sleeps is serialized.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from ..errors import ConfigError, RunAborted

_WAIT_SLICE_S = 0.2


@dataclass(frozen=True)
class SleepPolicy:
    """Backoff schedule for re-probing an empty port.

    ``delay(attempt)`` = min(base_delay * factor**attempt, max_delay).
    The defaults give a constant 10 ms pause, which in practice beats
    exponential backoff here: result latency is bounded, so the tail
    penalty of a long backoff is paid on every single iteration.
    """

    base_delay: float = 0.010
    factor: float = 1.0
    max_delay: float = 0.010

    def __post_init__(self) -> None:
        if self.base_delay < 0 or self.max_delay < 0:
            raise ConfigError("sleep delays must be nonnegative")
        if self.factor < 1.0:
            raise ConfigError("backoff factor must be >= 1")

    def delay(self, attempt: int) -> float:
        # Cap the exponent: beyond ~64 doublings every real schedule has
        # saturated at max_delay, and float ** raises on huge exponents.
        return min(self.base_delay * self.factor ** min(attempt, 64), self.max_delay)


class TimeSource:
    """Wall-clock time. register/gate are no-ops; sleep really sleeps."""

    def register(self, name: str) -> None:
        pass

    def unregister(self, name: str) -> None:
        pass

    def gate(self, name: str) -> None:
        """Block until ``name`` may act. No-op in real time."""

    def sleep(self, name: str, duration: float) -> None:
        if duration > 0:
            time.sleep(duration)

    def abort(self) -> None:
        pass


RealTime = TimeSource


class VirtualClock(TimeSource):
    """Deterministic logical time shared by a set of named participants.

    The participant with the lexicographically smallest (time, name) pair
    holds the floor; everyone else waits in ``gate``. Ties are broken by
    name, so given fixed participant names the full interleaving of paced
    actions is a pure function of the sleep durations requested.
    """

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._times: dict[str, float] = {}
        self._aborted = False

    def register(self, name: str) -> None:
        with self._cond:
            if name in self._times:
                raise ConfigError(f"duplicate clock participant {name!r}")
            self._times[name] = 0.0
            self._cond.notify_all()

    def unregister(self, name: str) -> None:
        with self._cond:
            self._times.pop(name, None)
            self._cond.notify_all()

    def _holds_floor(self, name: str) -> bool:
        me = self._times.get(name)
        if me is None:
            return True  # not paced (or already unregistered): never block
        return min(self._times.items(), key=lambda kv: (kv[1], kv[0]))[0] == name

    def gate(self, name: str) -> None:
        with self._cond:
            while not self._holds_floor(name):
                if self._aborted:
                    raise RunAborted("virtual clock aborted")
                self._cond.wait(_WAIT_SLICE_S)
            if self._aborted:
                raise RunAborted("virtual clock aborted")

    def sleep(self, name: str, duration: float) -> None:
        with self._cond:
            if name in self._times:
                self._times[name] += max(duration, 0.0)
                self._cond.notify_all()
        self.gate(name)

    def abort(self) -> None:
        with self._cond:
            self._aborted = True
            self._cond.notify_all()

    def now(self, name: str) -> float:
        with self._cond:
            return self._times.get(name, 0.0)
