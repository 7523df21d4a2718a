"""Exception types raised across the simulator."""


class HexmobError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(HexmobError, ValueError):
    """Invalid grid, scheme, or simulation parameters."""


class StateMachineError(HexmobError):
    """An MM transition was requested from a state that does not allow it."""


class OrderingError(HexmobError):
    """An HLR record would make the log's timestamps decrease."""


class PagingError(HexmobError):
    """Paging was requested for a station the network cannot reach."""


class InvariantViolation(HexmobError):
    """A per-tick invariant failed while running in validation mode."""
