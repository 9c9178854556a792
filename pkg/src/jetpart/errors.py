"""Exception types raised by jetpart."""


class JetpartError(Exception):
    """Base class for all jetpart errors."""


class ParseError(JetpartError):
    """A graph file could not be parsed.

    Carries the file path and the 1-based line number of the offending line.
    """

    def __init__(self, path, lineno, message):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{self.path}:{lineno}: {message}")


class PreprocessError(JetpartError):
    """Raised when an edge list cannot be turned into a usable graph."""


class BalanceInfeasibleError(JetpartError):
    """No partition can satisfy the balance constraint.

    Raised when a single vertex weight already exceeds the part-weight
    limit, so no assignment of that vertex is feasible.
    """


class RebalanceInfeasibleError(JetpartError):
    """A rebalancing pass found no valid destination part."""
