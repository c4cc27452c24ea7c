"""Exception hierarchy.

Every error raised on purpose by this package derives from ``ZeroOneOTError``
so callers (the CLI in particular) can separate modelling failures from bugs.
"""


class ZeroOneOTError(Exception):
    """Base class for all package errors."""


class ValidationError(ZeroOneOTError, ValueError):
    """A value violates a named invariant of its type."""

    def __init__(self, invariant, message=None):
        self.invariant = invariant
        super().__init__(message or invariant)


class GroundMismatch(ValidationError):
    def __init__(self, message="operands live on different ground sets"):
        super().__init__("shared ground", message)


class RelationNotPreorder(ValidationError):
    """Raised when an operation needs a reflexive transitive relation.

    ``witness`` is either ``("reflexive", i)`` or ``("transitive", (i, j, k))``
    in point indices.
    """

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__("preorder", message or f"relation is not a preorder: {witness}")


class CostConditionsViolated(ValidationError):
    def __init__(self, report, message=None):
        self.report = report
        super().__init__("zero diagonal and triangle inequality",
                         message or f"cost violates the quasi-metric conditions: {report}")


class InfeasiblePotential(ValidationError):
    def __init__(self, message="potential violates phi(x) - phi(y) <= c(x, y)"):
        super().__init__("one-variable feasibility", message)


class RangeViolation(ValidationError):
    def __init__(self, message="potential values must lie in [0, 1]"):
        super().__init__("values in [0, 1]", message)


class TooLarge(ZeroOneOTError, ValueError):
    pass


class InvalidParameter(ZeroOneOTError, ValueError):
    pass


class InvalidResolution(InvalidParameter):
    pass


class InvalidShift(InvalidParameter):
    pass


class MissingLabels(ValidationError):
    def __init__(self, message="ground set carries no coordinate labels"):
        super().__init__("labels present", message)


class OverlappingSupports(ValidationError):
    def __init__(self, message="supports of mu and nu intersect"):
        super().__init__("disjoint supports", message)


class CertificateFailure(ZeroOneOTError, AssertionError):
    """Primal and dual disagree. Never expected on a valid preorder."""


class ParseError(ZeroOneOTError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
