"""Exception types shared across the package."""


class GraphError(ValueError):
    """Malformed graph construction or use."""


class UnknownNodeError(GraphError):
    """An operation referenced a node the graph does not contain."""


class EdgeConflictError(GraphError):
    """Self loop, or a second edge between an already connected pair."""


class CycleError(GraphError):
    """A forbidden cycle; ``witness`` is a replayable node sequence."""

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class FamilyError(GraphError):
    """Graph is not valid for the requested family.

    Carries the full validity report so callers can show the violations.
    """

    def __init__(self, family, report):
        super().__init__(f"graph is not a valid member of family {family!r}")
        self.family = family
        self.report = report


class QueryError(ValueError):
    """Ill-posed separation query (overlapping sets, determined flanks,
    or a determination map given to a criterion that rejects one)."""


class GuardError(RuntimeError):
    """An enumeration exceeded its configured size guard."""


class MaximalityError(RuntimeError):
    """The unique-maximum invariant of an equivalence class failed.

    This is a bug trap: it should never fire on valid inputs.
    """


class ParseError(ValueError):
    """Graph text that does not follow the format; carries the line number."""

    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


class PositiveDefiniteError(RuntimeError):
    """A covariance block could not be certified positive definite."""
