"""Exception hierarchy shared across the package."""


class VulnGraphError(Exception):
    """Base class for all package errors."""


class InputError(VulnGraphError, ValueError):
    """Malformed construction input (empty labels, bad records)."""


class UnknownVertexError(VulnGraphError, KeyError):
    """Vertex is not part of the graph."""


class DomainError(VulnGraphError, ValueError):
    """Vertex exists but has the wrong kind, or arguments violate a precondition."""


class ParameterError(VulnGraphError, ValueError):
    """Numeric parameter out of its admissible range."""


class DimensionError(VulnGraphError, ValueError):
    """Bit-vector length does not match the model."""


class ParseError(VulnGraphError, ValueError):
    """Scan report could not be parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(VulnGraphError, ValueError):
    """Scan report parsed but violates the schema."""


class SolverError(VulnGraphError, RuntimeError):
    """A solver refused the instance or could not produce a cover."""


class ExactTimeout(SolverError):
    """Exact search exceeded its time budget."""


class InvalidCoverError(VulnGraphError, ValueError):
    """Vertex set leaves at least one dual edge uncovered."""

    def __init__(self, uncovered):
        self.uncovered = list(uncovered)
        shown = ", ".join(f"{u.label}-{v.label}" for u, v in self.uncovered[:5])
        more = "" if len(self.uncovered) <= 5 else f" (+{len(self.uncovered) - 5} more)"
        super().__init__(f"{len(self.uncovered)} dual edge(s) uncovered: {shown}{more}")


class TheoremViolation(VulnGraphError, AssertionError):
    """A valid cover left a kill chain behind. Indicates a bug, never expected."""
