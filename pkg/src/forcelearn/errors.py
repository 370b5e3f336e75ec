"""Exception hierarchy shared by every module of the package."""


class ForceLearnError(Exception):
    """Base class for all package errors."""


class DeterminacyViolation(ForceLearnError):
    """A literal has more than one maximal satisfying substitution."""


class BudgetExceeded(ForceLearnError):
    """Proof search ran out of depth budget (diagnostic only)."""


class PredicateCollision(ForceLearnError):
    """The reserved ``equal`` predicate is already used inconsistently."""


class EmbeddingFailure(ForceLearnError):
    """A clause cannot be mapped into a bottom clause."""


class BasecaseOracleError(ForceLearnError):
    """The basecase oracle raised or returned garbage."""


class NoBaseClause(ForceLearnError):
    """A basecase query was made against a single-clause target."""


class PoolLabelMismatch(ForceLearnError):
    """A labelled pool instance disagrees with the target program."""


class NonListFunctor(ForceLearnError):
    """Flattening met a function symbol other than the list constructor."""


class TeacherError(ForceLearnError):
    """Transport or protocol failure while talking to a teacher."""


class InvariantBreach(ForceLearnError):
    """An internal consistency check failed; indicates a bug."""


class ParseError(ForceLearnError):
    """Syntax error with a source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)
