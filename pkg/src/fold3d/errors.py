"""Exception types shared across the package."""


class FoldError(Exception):
    """Base class for all fold3d errors."""


class DegenerateInput(FoldError):
    """Input configuration is degenerate for the requested construction."""


class InvalidConstraint(FoldError):
    """Constraint payload violates the precondition of its incidence kind."""


class InvalidOperation(FoldError):
    """Constraint combination does not define a valid fold operation."""


class IllPosed(FoldError):
    """Instance is structurally degenerate (solution set collapses or blows up)."""


class NoEnvelope(FoldError):
    """The plane family has no envelope surface."""


class VerificationFailed(FoldError):
    """Numeric verification of a claimed geometric property failed."""


class AllRealLine(FoldError):
    """Polynomial is identically zero: every real number is a root."""


class ParseError(FoldError):
    """Scene file or argument text could not be parsed."""


class ValidationError(FoldError):
    """Scene content parsed but violates a structural precondition."""
