"""Non-blocking optimizer loop.

The optimizer never blocks on its result port. Each loop iteration does,
in order: check for a management command; probe the result port and fold
in a result if one arrived; finish if the budget is met; send the next
candidate if none is outstanding; otherwise sleep briefly and try again.
Because the only wait is a bounded sleep, the loop cannot deadlock no
matter how slow or bursty the evaluator is, and a Stop command is
observed within one sleep delay plus one step.

Completion is published two ways: a ``done`` flag readable from outside
through a reference port (pollable without touching any channel), and a
Done sentinel pushed to the candidate port so a peer evaluator knows to
shut down.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from ..errors import Disconnected
from ..runtime.process import Process, ProcessContext, RefPortHandle
from ..runtime.timesource import SleepPolicy
from ..runtime.tokens import CommandKind, Done, ParamVector, ResultTuple
from ..bo.search import Observation

RESULT_PORT = "result_in"
CANDIDATE_PORT = "candidates"

_PAUSE_POLL_S = 0.005


class ActionKind(Enum):
    STOPPED = "stopped"
    PAUSED = "paused"
    SLEPT = "slept"
    FORWARDED = "forwarded"
    SUGGESTED = "suggested"
    FINISHED = "finished"


@dataclass(frozen=True)
class LoopAction:
    kind: ActionKind
    value: Any = None


class AsyncOptimizer(Process):
    """Drives a suggest/update search over an asynchronous evaluator.

    One request is kept in flight at a time: every result is folded into
    the search before the next suggestion, so the model behind suggestion
    k always contains the first k - 1 observations.
    """

    handles_commands = True

    def __init__(
        self,
        name: str,
        search: Any,
        budget: int,
        sleep_policy: SleepPolicy | None = None,
    ) -> None:
        super().__init__(name)
        self.search = search
        self.budget = budget
        self.sleep_policy = sleep_policy or SleepPolicy()
        self.add_in_port(RESULT_PORT)
        self.add_out_port(CANDIDATE_PORT)
        self.expose_ref("done", False)
        self.completed = 0
        self.in_flight = 0
        self.probe_attempts = 0
        self.sleeps = 0
        self.failure: Optional[str] = None
        self._pending: Optional[tuple[float, ...]] = None
        self._paused = False
        self._empty_streak = 0
        self._probes_delta = 0
        self._sleeps_delta = 0

    # -- Process interface ---------------------------------------------------

    def step(self, ctx: ProcessContext) -> bool:
        action = self.loop_step(ctx)
        return action.kind in (ActionKind.STOPPED, ActionKind.FINISHED)

    # -- the loop --------------------------------------------------------------

    def loop_step(self, ctx: ProcessContext) -> LoopAction:
        cmd = ctx.check_command()
        if cmd is CommandKind.STOP:
            self._publish_done(ctx)
            ctx.emit("optimizer_stopped", completed=self.completed)
            return LoopAction(ActionKind.STOPPED)
        if cmd is CommandKind.PAUSE:
            self._paused = True
        elif cmd is CommandKind.RUN:
            self._paused = False
        if self._paused:
            ctx.sleep(_PAUSE_POLL_S)
            return LoopAction(ActionKind.PAUSED)

        try:
            probe = ctx.probe(RESULT_PORT)
            self.probe_attempts += 1
            self._probes_delta += 1
            if probe.available:
                obs = self._accept(ctx, ctx.recv(RESULT_PORT))
                if obs is not None:
                    return LoopAction(ActionKind.FORWARDED, obs)

            if self.completed >= self.budget:
                self._publish_done(ctx)
                ctx.emit("optimizer_finished", completed=self.completed)
                return LoopAction(ActionKind.FINISHED)

            if self.in_flight == 0:
                x = self.search.suggest()
                params = ParamVector(tuple(float(v) for v in x))
                ctx.send(CANDIDATE_PORT, params)
                self._pending = params.values
                self.in_flight = 1
                return LoopAction(ActionKind.SUGGESTED, params)

            if probe.empty and ctx.port_disconnected(RESULT_PORT):
                self.failure = "result port disconnected with a request in flight"
                self._publish_done(ctx)
                ctx.emit("optimizer_failed", reason=self.failure)
                return LoopAction(ActionKind.STOPPED)
        except Disconnected as exc:
            self.failure = f"peer disconnected: {exc}"
            self._publish_done(ctx)
            ctx.emit("optimizer_failed", reason=self.failure)
            return LoopAction(ActionKind.STOPPED)

        delay = self.sleep_policy.delay(self._empty_streak)
        self._empty_streak += 1
        self.sleeps += 1
        self._sleeps_delta += 1
        ctx.sleep(delay)
        return LoopAction(ActionKind.SLEPT, delay)

    # -- helpers ----------------------------------------------------------------

    def _accept(self, ctx: ProcessContext, token: Any) -> Optional[Observation]:
        """Validate an incoming result. Returns None when it is dropped."""
        if not isinstance(token, ResultTuple):
            ctx.emit("result_dropped", reason=f"unexpected token {type(token).__name__}")
            return None
        if token.params != self._pending:
            ctx.emit(
                "result_dropped",
                reason="echo mismatch",
                expected=list(self._pending or ()),
                got=list(token.params),
            )
            return None
        obs = Observation(x=token.params, y=token.score)
        self.search.update(obs)
        self.completed += 1
        self.in_flight = 0
        self._pending = None
        self._empty_streak = 0
        ctx.emit(
            "iteration",
            iter=self.completed,
            x=list(obs.x),
            y=obs.y,
            y_best=self.search.y_best,
            probe_attempts=self._probes_delta,
            sleeps=self._sleeps_delta,
        )
        self._probes_delta = 0
        self._sleeps_delta = 0
        return obs

    def _publish_done(self, ctx: ProcessContext) -> None:
        ctx.set_ref("done", True)
        try:
            ctx.send_nowait(CANDIDATE_PORT, Done())
        except Disconnected:  # pragma: no cover - nowait cannot raise, belt and braces
            pass


def await_done(
    ref_port: RefPortHandle,
    poll_interval: float = 0.005,
    timeout: float = 30.0,
) -> str:
    """Poll a done flag without touching any channel.

    Returns "finished" or "timed_out". The first read happens before any
    sleep, so a flag that is already set is seen immediately, and a flag
    that flips mid-wait is seen within one poll interval.
    """
    deadline = time.monotonic() + timeout
    while True:
        if ref_port.read():
            return "finished"
        if time.monotonic() >= deadline:
            return "timed_out"
        time.sleep(poll_interval)
