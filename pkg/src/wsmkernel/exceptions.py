"""Exception hierarchy shared by every module of the package."""


class WsmError(Exception):
    """Base class for all errors raised by wsmkernel."""


class GraphParseError(WsmError, ValueError):
    """Malformed ``.gr`` input. ``line`` is 1-based, or None for end-of-file problems."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormulaSyntaxError(WsmError, ValueError):
    """Malformed formula text; ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"at position {position}: {message}"
        super().__init__(message)


class ContractViolation(WsmError, ValueError):
    """A precondition of an operation does not hold for the given arguments."""


class CapacityError(WsmError):
    """The input exceeds a configured brute-force limit."""


class BelowThresholdError(WsmError):
    """Rank-width of the input is too small for the requested operation.

    ``width`` carries the rank-width (or an upper bound on it) that was found.
    """

    def __init__(self, message, width=None):
        self.width = width
        super().__init__(message)


class InvariantViolation(WsmError, AssertionError):
    """Internal self-check failed; indicates a bug, not bad input."""


class SearchExhausted(WsmError):
    """No type-equivalent representative exists within the size cap."""

    def __init__(self, message, module=None):
        self.module = module
        super().__init__(message)
