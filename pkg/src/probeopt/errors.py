"""Exception types shared across the package."""

from __future__ import annotations


class ProbeoptError(Exception):
    """Base class for all package errors."""


class ConfigError(ProbeoptError, ValueError):
    """Invalid runtime or experiment configuration."""


class PortAlreadyConnected(ProbeoptError):
    pass


class DirectionMismatch(ProbeoptError):
    pass


class Disconnected(ProbeoptError):
    """Channel peer closed: send with no consumer, or recv with an empty
    buffer and no producer left to fill it."""


class UnknownProcess(ProbeoptError, KeyError):
    pass


class CommandAfterStop(ProbeoptError):
    """Stop is terminal; no further commands may target the process."""


class RunAborted(ProbeoptError):
    """Raised inside blocked channel operations when the watchdog tears a
    run down. Internal control flow; run() converts it into a report."""


class DimensionMismatch(ProbeoptError, ValueError):
    pass


class OutOfBounds(ProbeoptError, ValueError):
    pass


class NotPositiveDefinite(ProbeoptError, ValueError):
    """Gram matrix failed its Cholesky factorization."""


class EmptyGraph(ProbeoptError, ValueError):
    """No visible satellite/request pairs, so there is nothing to encode."""
