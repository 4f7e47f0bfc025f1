"""Exception hierarchy shared by all modules."""


class ContractiveError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ContractiveError, ValueError):
    """An argument lies outside the domain of the operation."""


class SpecParseError(DomainError):
    """A function-spec document is malformed; ``path`` names the offending node."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class AccuracyError(ContractiveError, ArithmeticError):
    """A numerical accuracy guard (tail bound, de-aliasing, step check) failed."""


class ConvergenceError(AccuracyError):
    """An iterative computation did not converge."""


class EvaluationError(ContractiveError, FloatingPointError):
    """An integrand produced a non-finite value."""


class UnsupportedVariantError(ContractiveError, TypeError):
    """The operation is not defined for this function representation."""
