"""Non-blocking optimizer process and its loop actions."""

from .loop import ActionKind, AsyncOptimizer, LoopAction, await_done

__all__ = ["ActionKind", "AsyncOptimizer", "LoopAction", "await_done"]
