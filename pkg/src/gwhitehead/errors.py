"""Exception hierarchy shared by all modules."""


class GWError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GWError):
    """A structural invariant of a graph, group, or marking is violated."""


class ParseError(GWError):
    """Instance file could not be parsed; carries (line, column, message)."""

    def __init__(self, line, column, message):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class IndeterminateAtHorizon(GWError):
    """A lexicographic decision could not be made within the truncation horizon."""


class HypothesisNotMet(GWError):
    """The preconditions of a move or a lemma check do not hold."""


class PropertyViolation(GWError):
    """A checked identity or lemma conclusion failed; message names the witness."""


class InternalInconsistency(GWError):
    """Two supposedly equivalent computations disagree (implementation bug)."""
