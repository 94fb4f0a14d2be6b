class HdrrError(Exception):
    """Base class for library errors."""


class MalformedCandidate(HdrrError, ValueError):
    pass


class BudgetExceeded(HdrrError):
    pass


class SolverTimeout(BudgetExceeded):
    pass


class NotRemovable(HdrrError, ValueError):
    pass


class UnknownElement(HdrrError, KeyError):
    pass


class FamilyMismatch(HdrrError, ValueError):
    pass


class InconsistentStats(HdrrError, ValueError):
    pass


class ShapeMismatch(HdrrError, ValueError):
    pass


class PoolNotGadgetAligned(HdrrError, ValueError):
    pass


class BlockCountMismatch(HdrrError, ValueError):
    pass


class GraphTooSmall(HdrrError, ValueError):
    pass


class ParseError(HdrrError, ValueError):
    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


class WidthError(ParseError):
    pass


class SchemaVersionError(HdrrError, ValueError):
    pass


class NotAGraph(HdrrError, ValueError):
    pass
