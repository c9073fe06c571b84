"""Process graph construction and execution.

Two execution modes:

* ``SYNC_BARRIER``: a single driver steps every process once per round in
  registration order. A process that blocks inside its step stalls the
  whole round, which is exactly how lockstep schedules deadlock when one
  side waits on data the other has not produced yet.
* ``ASYNC``: one thread per process, free-running. Processes coordinate
  through channels, probes and sleeps only.

A watchdog thread monitors a global progress counter (sends, recvs,
probes, issued commands and completed steps all count). If nothing
progresses for ``watchdog_timeout`` seconds the run is declared
deadlocked: blocked channel operations are woken with an abort, every
thread unwinds, and the report carries a diagnostic naming which process
was parked on which port.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..errors import (
    CommandAfterStop,
    ConfigError,
    DirectionMismatch,
    Disconnected,
    PortAlreadyConnected,
    RunAborted,
    UnknownProcess,
)
from .channel import Channel, ChannelHooks
from .process import Direction, PortSpec, Process, ProcessContext, RefPortHandle
from .timesource import TimeSource
from .tokens import Command, CommandKind
from .trace import Recorder

log = logging.getLogger(__name__)


class Mode(Enum):
    SYNC_BARRIER = "sync_barrier"
    ASYNC = "async"


@dataclass(frozen=True)
class RunLimits:
    max_steps: int = 100_000
    watchdog_timeout: float = 2.0

    def __post_init__(self) -> None:
        if self.max_steps <= 0:
            raise ConfigError("max_steps must be positive")
        if self.watchdog_timeout <= 0:
            raise ConfigError("watchdog_timeout must be positive")


@dataclass
class RunReport:
    steps_executed: dict[str, int]
    probe_counts: dict[str, int]
    deadlock_detected: bool
    deadlock_diagnostic: Optional[str]
    wall_time: float
    errors: dict[str, str] = field(default_factory=dict)


class _GraphHooks(ChannelHooks):
    """Progress counter plus a table of who is blocked where."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._progress = 0
        self._blocked: dict[str, tuple[str, str]] = {}

    def progress(self) -> None:
        with self._lock:
            self._progress += 1

    def progress_count(self) -> int:
        with self._lock:
            return self._progress

    def blocked(self, who: str, op: str, port: str) -> None:
        with self._lock:
            self._blocked[who] = (op, port)

    def unblocked(self, who: str) -> None:
        with self._lock:
            self._blocked.pop(who, None)

    def blocked_table(self) -> dict[str, tuple[str, str]]:
        with self._lock:
            return dict(self._blocked)


class ProcessGraph:
    def __init__(self) -> None:
        self._procs: dict[str, Process] = {}
        self._order: list[Process] = []
        self._channels: list[Channel] = []
        self._mgmt: dict[str, Channel] = {}
        self._hooks = _GraphHooks()
        self._last_command: dict[str, CommandKind] = {}
        self._terminated: set[str] = set()
        self._state_lock = threading.Lock()
        self._started = False

    # -- construction -------------------------------------------------------

    def add_process(self, proc: Process) -> Process:
        if proc.name in self._procs:
            raise ConfigError(f"duplicate process name {proc.name!r}")
        self._procs[proc.name] = proc
        self._order.append(proc)
        self._mgmt[proc.name] = Channel(
            f"mgmt:{proc.name}", capacity=16, hooks=self._hooks
        )
        return proc

    def connect(
        self,
        src: PortSpec,
        dst: PortSpec,
        capacity: int = 64,
        dim: Optional[int] = None,
    ) -> Channel:
        for spec in (src, dst):
            if spec.owner.name not in self._procs or self._procs[spec.owner.name] is not spec.owner:
                raise UnknownProcess(f"{spec.owner.name} is not part of this graph")
        if src.direction is not Direction.OUT:
            raise DirectionMismatch(f"{src!r} cannot be a channel source")
        if dst.direction is not Direction.IN:
            raise DirectionMismatch(f"{dst!r} cannot be a channel destination")
        if src.connected:
            raise PortAlreadyConnected(f"{src!r} already has a channel")
        if dst.connected:
            raise PortAlreadyConnected(f"{dst!r} already has a channel")
        cid = f"ch{len(self._channels)}:{src.owner.name}.{src.name}->{dst.owner.name}.{dst.name}"
        channel = Channel(cid, capacity=capacity, dim=dim, hooks=self._hooks)
        channel.set_labels(
            src.owner.name,
            f"{src.owner.name}.{src.name}",
            dst.owner.name,
            f"{dst.owner.name}.{dst.name}",
        )
        src.channel = channel
        dst.channel = channel
        self._channels.append(channel)
        return channel

    def ref_port(self, proc_name: str, var_name: str) -> RefPortHandle:
        if proc_name not in self._procs:
            raise UnknownProcess(proc_name)
        proc = self._procs[proc_name]
        if var_name not in proc.refs:
            raise ConfigError(f"{proc_name} exposes no ref {var_name!r}")
        return RefPortHandle(
            proc.refs[var_name],
            lambda: self.is_terminated(proc_name),
        )

    # -- control plane ------------------------------------------------------

    def issue_command(self, proc_name: str, kind: CommandKind) -> None:
        if proc_name not in self._procs:
            raise UnknownProcess(proc_name)
        with self._state_lock:
            if self._last_command.get(proc_name) is CommandKind.STOP:
                raise CommandAfterStop(f"{proc_name} already received Stop")
            self._last_command[proc_name] = kind
        if not self._mgmt[proc_name].send_nowait(Command(kind)):
            raise ConfigError(f"command queue for {proc_name} is full or closed")

    def is_terminated(self, proc_name: str) -> bool:
        with self._state_lock:
            return proc_name in self._terminated

    # -- execution ----------------------------------------------------------

    def start(
        self,
        mode: Mode,
        limits: RunLimits = RunLimits(),
        time_source: Optional[TimeSource] = None,
        recorder: Optional[Recorder] = None,
    ) -> "RunHandle":
        if not self._procs:
            raise ConfigError("graph has no processes")
        if self._started:
            raise ConfigError("graph already started")
        self._started = True
        ts = time_source or TimeSource()
        rec = recorder or Recorder()
        run = _Run(self, mode, limits, ts, rec)
        run.start()
        return RunHandle(run)

    def run(
        self,
        mode: Mode,
        limits: RunLimits = RunLimits(),
        time_source: Optional[TimeSource] = None,
        recorder: Optional[Recorder] = None,
    ) -> RunReport:
        return self.start(mode, limits, time_source, recorder).wait()

    # -- internals shared with _Run ------------------------------------------

    def _mark_terminated(self, proc: Process) -> None:
        with self._state_lock:
            if proc.name in self._terminated:
                return
            self._terminated.add(proc.name)
        for spec in proc.ports.values():
            if spec.channel is None:
                continue
            if spec.direction is Direction.OUT:
                spec.channel.close_producer()
            else:
                spec.channel.close_consumer()


class _Run:
    """One execution of a graph: threads, watchdog, report assembly."""

    def __init__(
        self,
        graph: ProcessGraph,
        mode: Mode,
        limits: RunLimits,
        time_source: TimeSource,
        recorder: Recorder,
    ) -> None:
        self.graph = graph
        self.mode = mode
        self.limits = limits
        self.ts = time_source
        self.recorder = recorder
        self.hooks = graph._hooks
        self.aborted = threading.Event()
        self.finished = threading.Event()
        self._live_lock = threading.Lock()
        self._live = 0
        self.deadlock = False
        self.diagnostic: Optional[str] = None
        self.errors: dict[str, str] = {}
        self.ctxs: dict[str, ProcessContext] = {}
        self.threads: list[threading.Thread] = []
        self.t_start = 0.0
        self.wall_time = 0.0

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> None:
        graph = self.graph
        for proc in graph._order:
            self.ctxs[proc.name] = ProcessContext(
                proc,
                self.ts,
                self.recorder,
                graph._mgmt[proc.name],
                self.hooks.progress,
            )
        self.t_start = time.monotonic()
        if self.mode is Mode.ASYNC:
            # Register every participant before any thread moves, otherwise
            # an early thread could act while the clock's floor is undefined.
            for proc in graph._order:
                self.ts.register(proc.name)
            for proc in graph._order:
                t = threading.Thread(
                    target=self._async_main, args=(proc,), name=f"proc:{proc.name}", daemon=True
                )
                self.threads.append(t)
            self._live = len(self.threads)
            for t in self.threads:
                t.start()
        else:
            t = threading.Thread(target=self._sync_main, name="sync-driver", daemon=True)
            self.threads.append(t)
            self._live = 1
            t.start()
        self.watchdog = threading.Thread(target=self._watchdog_main, name="watchdog", daemon=True)
        self.watchdog.start()

    def _main_exited(self) -> None:
        """Last main thread out marks the run finished.

        Without this, a graph whose processes all terminate before the
        caller joins would look stalled to the watchdog and be reported
        as a deadlock even though the run is simply over.
        """
        with self._live_lock:
            self._live -= 1
            if self._live > 0:
                return
        if not self.finished.is_set():
            self.wall_time = time.monotonic() - self.t_start
            self.finished.set()

    def _abort(self, diagnostic: str) -> None:
        self.deadlock = True
        self.diagnostic = diagnostic
        self.aborted.set()
        for channel in self.graph._channels:
            channel.abort()
        for channel in self.graph._mgmt.values():
            channel.abort()
        self.ts.abort()

    def _watchdog_main(self) -> None:
        timeout = self.limits.watchdog_timeout
        last = self.hooks.progress_count()
        last_change = time.monotonic()
        while not self.finished.wait(min(0.05, timeout / 4)):
            current = self.hooks.progress_count()
            now = time.monotonic()
            if current != last:
                last, last_change = current, now
            elif now - last_change >= timeout:
                diagnostic = self._describe_stall(timeout)
                log.warning("watchdog fired: %s", diagnostic)
                self.recorder.emit("watchdog", diagnostic=diagnostic)
                self._abort(diagnostic)
                return

    def _describe_stall(self, timeout: float) -> str:
        table = self.hooks.blocked_table()
        if table:
            parts = [f"{who} blocked in {op} on {port}" for who, (op, port) in sorted(table.items())]
            detail = "; ".join(parts)
        else:
            detail = "no process blocked on a port (stalled outside channel ops)"
        return f"no progress for {timeout:g}s: {detail}"

    # -- async mode -----------------------------------------------------------

    def _async_main(self, proc: Process) -> None:
        ctx = self.ctxs[proc.name]
        try:
            proc.setup(ctx)
            self.ts.gate(proc.name)
            while not self.aborted.is_set() and ctx.steps < self.limits.max_steps:
                if not proc.handles_commands:
                    cmd = ctx.check_command()
                    if cmd is CommandKind.STOP:
                        break
                    if cmd is CommandKind.PAUSE:
                        if not self._pause_wait(proc, ctx):
                            break
                        continue
                finished = proc.step(ctx)
                ctx.steps += 1
                self.hooks.progress()
                if finished:
                    break
                ctx.sleep(proc.step_interval)
        except (Disconnected, RunAborted):
            pass
        except Exception as exc:  # noqa: BLE001 - a crashed process must not hang the run
            log.exception("process %s crashed", proc.name)
            self.errors[proc.name] = f"{type(exc).__name__}: {exc}"
        finally:
            try:
                proc.finish(ctx)
            except Exception as exc:  # noqa: BLE001
                self.errors.setdefault(proc.name, f"finish: {type(exc).__name__}: {exc}")
            self.graph._mark_terminated(proc)
            self.ts.unregister(proc.name)
            self.hooks.progress()
            self._main_exited()

    def _pause_wait(self, proc: Process, ctx: ProcessContext) -> bool:
        """Hold the process until Run (True) or Stop/abort (False)."""
        interval = max(proc.step_interval, 0.005)
        while not self.aborted.is_set():
            cmd = ctx.check_command()
            if cmd is CommandKind.RUN:
                return True
            if cmd is CommandKind.STOP:
                return False
            ctx.sleep(interval)
        return False

    # -- sync barrier mode ------------------------------------------------------

    def _sync_main(self) -> None:
        graph = self.graph
        order = list(graph._order)
        paused: set[str] = set()
        done: set[str] = set()
        for proc in order:
            try:
                proc.setup(self.ctxs[proc.name])
            except Exception as exc:  # noqa: BLE001
                self.errors[proc.name] = f"setup: {type(exc).__name__}: {exc}"
                done.add(proc.name)
        try:
            for _round in range(1, self.limits.max_steps + 1):
                if self.aborted.is_set():
                    break
                live = [p for p in order if p.name not in done]
                if not live:
                    break
                stepped = 0
                for proc in live:
                    if self.aborted.is_set():
                        break
                    ctx = self.ctxs[proc.name]
                    if not proc.handles_commands:
                        cmd = ctx.check_command()
                        if cmd is CommandKind.STOP:
                            done.add(proc.name)
                            self._finish_proc(proc, ctx)
                            continue
                        if cmd is CommandKind.PAUSE:
                            paused.add(proc.name)
                        elif cmd is CommandKind.RUN:
                            paused.discard(proc.name)
                    if proc.name in paused:
                        continue
                    try:
                        finished = proc.step(ctx)
                    except RunAborted:
                        break
                    except Disconnected:
                        finished = True
                    except Exception as exc:  # noqa: BLE001
                        log.exception("process %s crashed", proc.name)
                        self.errors[proc.name] = f"{type(exc).__name__}: {exc}"
                        finished = True
                    ctx.steps += 1
                    stepped += 1
                    self.hooks.progress()
                    if finished:
                        done.add(proc.name)
                        self._finish_proc(proc, ctx)
                if stepped == 0 and not self.aborted.is_set():
                    # All live processes paused: the barrier itself is alive.
                    self.hooks.progress()
                    time.sleep(0.0005)
        finally:
            for proc in order:
                if proc.name not in done:
                    self._finish_proc(proc, self.ctxs[proc.name])
            self._main_exited()

    def _finish_proc(self, proc: Process, ctx: ProcessContext) -> None:
        try:
            proc.finish(ctx)
        except Exception as exc:  # noqa: BLE001
            self.errors.setdefault(proc.name, f"finish: {type(exc).__name__}: {exc}")
        self.graph._mark_terminated(proc)

    # -- completion -----------------------------------------------------------

    def wait(self, timeout: Optional[float] = None) -> RunReport:
        if self.finished.is_set():
            self.watchdog.join(1.0)
            return self.report()
        deadline = None if timeout is None else time.monotonic() + timeout
        for t in self.threads:
            while t.is_alive():
                t.join(0.1)
                if not t.is_alive():
                    break
                if self.aborted.is_set():
                    # Grace period for unwinding channel waits. A thread
                    # stalled outside channel ops cannot be recovered; it is
                    # a daemon, so the report is built without it.
                    t.join(2.0)
                    break
                if deadline is not None and time.monotonic() >= deadline:
                    raise TimeoutError(f"run did not finish within {timeout}s")
        if not self.finished.is_set():
            self.wall_time = time.monotonic() - self.t_start
            self.finished.set()
        self.watchdog.join()
        return self.report()

    def report(self) -> RunReport:
        return RunReport(
            steps_executed={name: ctx.steps for name, ctx in self.ctxs.items()},
            probe_counts={name: ctx.probes for name, ctx in self.ctxs.items()},
            deadlock_detected=self.deadlock,
            deadlock_diagnostic=self.diagnostic,
            wall_time=self.wall_time,
            errors=dict(self.errors),
        )


class RunHandle:
    """Join handle for a started graph."""

    def __init__(self, run: _Run) -> None:
        self._run = run

    def wait(self, timeout: Optional[float] = None) -> RunReport:
        return self._run.wait(timeout)

    @property
    def aborted(self) -> bool:
        return self._run.aborted.is_set()

    @property
    def finished(self) -> bool:
        """True once every process in the run has terminated."""
        return self._run.finished.is_set()
