"""Exception hierarchy shared by all modules."""


class QuadricError(Exception):
    """Base class for every error raised by this package."""


class ParseError(QuadricError, ValueError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class UnknownVertexError(QuadricError, KeyError):
    def __str__(self):
        return f"unknown vertex {self.args[0]!r}"


class GraphError(QuadricError, ValueError):
    """Malformed graph data (self-loop, duplicate edge, dangling endpoint)."""


class NotConnectedError(QuadricError, ValueError):
    pass


class NotBipartiteError(QuadricError, ValueError):
    pass


class NotCycleError(QuadricError, ValueError):
    pass


class NotFourBridgedError(QuadricError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotQuadricError(QuadricError, ValueError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class NotLocallyQuadricError(NotQuadricError):
    pass


class NotBiDismantlableError(QuadricError):
    """Greedy bi-dismantling got stuck; ``stuck`` is the remaining graph."""

    def __init__(self, message, stuck=None, removed=()):
        super().__init__(message)
        self.stuck = stuck
        self.removed = tuple(removed)


class InvalidActionError(QuadricError, ValueError):
    pass


class DiagramError(QuadricError, ValueError):
    """Inconsistent combinatorial map or label data."""


class DegenerateDiagramError(QuadricError, ValueError):
    pass


class PathologyError(QuadricError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PreconditionError(QuadricError, ValueError):
    pass


class NonReducedRelatorError(QuadricError, ValueError):
    pass


class BudgetExhaustedError(QuadricError):
    """Bounded word-problem search gave up; ``partial`` holds what was built."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
